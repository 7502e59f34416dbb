//! Per-author career profiles and the institution h-index lookup.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;
use std::path::Path;

use crate::corpus::PaperRecord;
use crate::error::{io_at, CoreError, Result};

/// Institution id -> h-index, read from a two-column TSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HIndexTable {
    entries: HashMap<String, u32>,
}

impl HIndexTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, institution: &str, h: u32) -> Result<()> {
        match self.entries.get(institution) {
            Some(&old) if old != h => Err(CoreError::HIndexConflict(institution.to_string())),
            _ => {
                self.entries.insert(institution.to_string(), h);
                Ok(())
            }
        }
    }

    pub fn get(&self, institution: &str) -> Option<u32> {
        self.entries.get(institution).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads `institution_id<TAB>h_index` rows. A first line whose second
    /// column is not an integer is taken as a header. Repeated rows must agree.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut table = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(id), Some(h), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(CoreError::HIndexRow {
                    line: i + 1,
                    reason: "expected two tab-separated columns".into(),
                });
            };
            match h.trim().parse::<u32>() {
                Ok(h) => table.insert(id.trim(), h)?,
                Err(_) if i == 0 => continue,
                Err(_) => {
                    return Err(CoreError::HIndexRow {
                        line: i + 1,
                        reason: format!("'{h}' is not a non-negative integer"),
                    })
                }
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(io_at(path))?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn write_tsv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "institution_id\th_index")?;
        let sorted: BTreeMap<_, _> = self.entries.iter().collect();
        for (id, h) in sorted {
            writeln!(out, "{id}\t{h}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorProfile {
    pub author_id: String,
    pub first_pub_year: i32,
    /// (year, publications up to and including that year), ascending.
    cumulative: Vec<(i32, u32)>,
    /// Affiliation on the most recent paper.
    pub institution_id: Option<String>,
    pub institution_h_index: u32,
    pub h_index_missing: bool,
}

impl AuthorProfile {
    pub fn cumulative_through(&self, year: i32) -> u32 {
        let k = self.cumulative.partition_point(|&(y, _)| y <= year);
        if k == 0 {
            0
        } else {
            self.cumulative[k - 1].1
        }
    }

    /// Publications with year in [lo, hi].
    pub fn count_between(&self, lo: i32, hi: i32) -> u32 {
        if hi < lo {
            return 0;
        }
        self.cumulative_through(hi) - self.cumulative_through(lo - 1)
    }

    pub fn career_age(&self, year: i32) -> i32 {
        year - self.first_pub_year
    }

    pub fn pub_count_by_year(&self) -> BTreeMap<i32, u32> {
        self.cumulative.iter().copied().collect()
    }
}

pub type AuthorProfiles = HashMap<String, AuthorProfile>;

pub fn build_author_profiles(records: &[PaperRecord], h_index: Option<&HIndexTable>) -> AuthorProfiles {
    let mut seen: HashMap<&str, Vec<(i32, Option<&str>)>> = HashMap::new();
    for r in records {
        for a in &r.authors {
            seen.entry(&a.author_id)
                .or_default()
                .push((r.year, a.institution_id.as_deref()));
        }
    }
    seen.into_iter()
        .map(|(id, mut pubs)| {
            pubs.sort_unstable();
            let mut cumulative: Vec<(i32, u32)> = Vec::new();
            for (k, &(y, _)) in pubs.iter().enumerate() {
                match cumulative.last_mut() {
                    Some(last) if last.0 == y => last.1 = k as u32 + 1,
                    _ => cumulative.push((y, k as u32 + 1)),
                }
            }
            let latest = pubs.last().unwrap().0;
            let institution_id = pubs
                .iter()
                .filter(|(y, i)| *y == latest && i.is_some())
                .filter_map(|(_, i)| *i)
                .min()
                .or_else(|| pubs.iter().rev().find_map(|(_, i)| *i))
                .map(str::to_string);
            let h = institution_id
                .as_deref()
                .and_then(|i| h_index.and_then(|t| t.get(i)));
            let profile = AuthorProfile {
                author_id: id.to_string(),
                first_pub_year: pubs[0].0,
                cumulative,
                institution_id,
                institution_h_index: h.unwrap_or(0),
                h_index_missing: h.is_none(),
            };
            (id.to_string(), profile)
        })
        .collect()
}
