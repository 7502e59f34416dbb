//! Column-oriented table with optional numeric cells and categorical keys.

use std::collections::BTreeMap;

use crate::error::{Result, StatsError};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Frame {
    len: usize,
    numeric: BTreeMap<String, Vec<Option<f64>>>,
    categorical: BTreeMap<String, Vec<Option<String>>>,
}

impl Frame {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert_numeric(&mut self, name: &str, values: Vec<Option<f64>>) -> Result<()> {
        self.check_len(name, values.len())?;
        self.numeric.insert(name.to_string(), values);
        Ok(())
    }

    /// Inserts a fully observed numeric column.
    pub fn insert_dense(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        self.insert_numeric(name, values.into_iter().map(Some).collect())
    }

    pub fn insert_categorical(&mut self, name: &str, values: Vec<Option<String>>) -> Result<()> {
        self.check_len(name, values.len())?;
        self.categorical.insert(name.to_string(), values);
        Ok(())
    }

    fn check_len(&self, name: &str, got: usize) -> Result<()> {
        if got != self.len {
            return Err(StatsError::LengthMismatch {
                name: name.to_string(),
                expected: self.len,
                got,
            });
        }
        Ok(())
    }

    pub fn numeric(&self, name: &str) -> Result<&[Option<f64>]> {
        self.numeric
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| StatsError::MissingColumn(name.to_string()))
    }

    pub fn categorical(&self, name: &str) -> Result<&[Option<String>]> {
        self.categorical
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| StatsError::MissingColumn(name.to_string()))
    }

    pub fn has_numeric(&self, name: &str) -> bool {
        self.numeric.contains_key(name)
    }

    pub fn has_categorical(&self, name: &str) -> bool {
        self.categorical.contains_key(name)
    }

    pub fn numeric_names(&self) -> impl Iterator<Item = &str> {
        self.numeric.keys().map(String::as_str)
    }

    /// Rows where every listed numeric column is present, as dense vectors.
    pub fn complete_cases(&self, names: &[&str]) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        let cols = names
            .iter()
            .map(|n| self.numeric(n))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<usize> = (0..self.len)
            .filter(|&i| cols.iter().all(|c| c[i].is_some()))
            .collect();
        let dense = cols
            .iter()
            .map(|c| rows.iter().map(|&i| c[i].unwrap_or(f64::NAN)).collect())
            .collect();
        Ok((rows, dense))
    }

    /// New frame holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Frame {
        let numeric = self
            .numeric
            .iter()
            .map(|(k, v)| (k.clone(), rows.iter().map(|&i| v[i]).collect()))
            .collect();
        let categorical = self
            .categorical
            .iter()
            .map(|(k, v)| (k.clone(), rows.iter().map(|&i| v[i].clone()).collect()))
            .collect();
        Frame {
            len: rows.len(),
            numeric,
            categorical,
        }
    }

    pub fn filter<F: FnMut(usize) -> bool>(&self, mut keep: F) -> Frame {
        let rows: Vec<usize> = (0..self.len).filter(|&i| keep(i)).collect();
        self.select_rows(&rows)
    }
}
