//! The 19 field labels and their four broad categories.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase")]
pub enum DisciplineGroup {
    NaturalSciences,
    AppliedSciences,
    SocialSciences,
    Humanities,
}

impl DisciplineGroup {
    pub fn label(self) -> &'static str {
        match self {
            Self::NaturalSciences => "NaturalSciences",
            Self::AppliedSciences => "AppliedSciences",
            Self::SocialSciences => "SocialSciences",
            Self::Humanities => "Humanities",
        }
    }
}

macro_rules! disciplines {
    ($($variant:ident => $label:literal, $group:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Discipline {
            $($variant,)*
        }

        impl Discipline {
            pub const ALL: [Discipline; 19] = [$(Discipline::$variant,)*];

            pub fn label(self) -> &'static str {
                match self {
                    $(Discipline::$variant => $label,)*
                }
            }

            pub fn group(self) -> DisciplineGroup {
                match self {
                    $(Discipline::$variant => DisciplineGroup::$group,)*
                }
            }
        }
    };
}

disciplines! {
    Art => "Art", Humanities;
    Biology => "Biology", NaturalSciences;
    Business => "Business", SocialSciences;
    Chemistry => "Chemistry", NaturalSciences;
    ComputerScience => "Computer Science", AppliedSciences;
    Economics => "Economics", SocialSciences;
    Engineering => "Engineering", AppliedSciences;
    EnvironmentalScience => "Environmental Science", NaturalSciences;
    Geography => "Geography", SocialSciences;
    Geology => "Geology", NaturalSciences;
    History => "History", Humanities;
    MaterialsScience => "Materials Science", AppliedSciences;
    Mathematics => "Mathematics", NaturalSciences;
    Medicine => "Medicine", NaturalSciences;
    Philosophy => "Philosophy", Humanities;
    Physics => "Physics", NaturalSciences;
    PoliticalScience => "Political Science", SocialSciences;
    Psychology => "Psychology", SocialSciences;
    Sociology => "Sociology", SocialSciences;
}

impl Discipline {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn valid_labels() -> String {
        Self::ALL.map(Discipline::label).join(", ")
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Discipline {
    type Err = CoreError;

    /// Case-insensitive; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|d| d.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| CoreError::UnknownDiscipline {
                label: s.to_string(),
                valid: Self::valid_labels(),
            })
    }
}

impl Serialize for Discipline {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Discipline {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn map_discipline_group(label: &str) -> Result<DisciplineGroup, CoreError> {
    label.parse::<Discipline>().map(Discipline::group)
}
