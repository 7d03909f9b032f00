use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AverageCompress, Averager, AveragerConfig, Dba, Ssg, SsgAuto};
use crate::compress::Compressor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseMethod {
    Dba,
    Ssg,
    SsgAuto,
}

impl BaseMethod {
    pub fn name(self) -> &'static str {
        match self {
            BaseMethod::Dba => "dba",
            BaseMethod::Ssg => "ssg",
            BaseMethod::SsgAuto => "ssg-auto",
        }
    }
}

/// A named averaging method: a base averager, optionally wrapped in
/// average-compress. Written `dba`, `ssg-auto`, `dba-mse`, `ssg-auto-ada`,
/// or with an iteration cap as in `dba-mse1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Method {
    pub base: BaseMethod,
    pub compressor: Option<Compressor>,
    pub iterations: Option<usize>,
}

impl Method {
    pub const DBA: Method = Method::plain(BaseMethod::Dba);

    pub const fn plain(base: BaseMethod) -> Self {
        Method {
            base,
            compressor: None,
            iterations: None,
        }
    }

    pub const fn compressed(base: BaseMethod, compressor: Compressor) -> Self {
        Method {
            base,
            compressor: Some(compressor),
            iterations: None,
        }
    }

    pub fn build(&self, config: AveragerConfig) -> Result<Box<dyn Averager>> {
        config.validate()?;
        let base: Box<dyn Averager> = match self.base {
            BaseMethod::Dba => Box::new(Dba {
                config: config.clone(),
            }),
            BaseMethod::Ssg => Box::new(Ssg {
                config: config.clone(),
            }),
            BaseMethod::SsgAuto => Box::new(SsgAuto {
                config: config.clone(),
            }),
        };
        Ok(match self.compressor {
            None => base,
            Some(compressor) => {
                let mut config = config;
                if self.iterations.is_some() {
                    config.ac_max_iterations = self.iterations;
                }
                Box::new(AverageCompress {
                    base,
                    compressor,
                    config,
                })
            }
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        if let Some(c) = self.compressor {
            write!(f, "-{}", c.name())?;
            if let Some(n) = self.iterations {
                write!(f, "{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let base_of = |name: &str| match name {
            "dba" => Some(BaseMethod::Dba),
            "ssg" => Some(BaseMethod::Ssg),
            "ssg-auto" => Some(BaseMethod::SsgAuto),
            _ => None,
        };
        if let Some(base) = base_of(&lower) {
            return Ok(Method::plain(base));
        }
        let unknown = || Error::invalid(format!("unknown averaging method `{s}`"));
        let (head, tail) = lower.rsplit_once('-').ok_or_else(unknown)?;
        let base = base_of(head).ok_or_else(unknown)?;
        let digits = tail.len() - tail.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (comp, count) = tail.split_at(tail.len() - digits);
        let compressor: Compressor = comp.parse().map_err(|_| unknown())?;
        let iterations = if count.is_empty() {
            None
        } else {
            let n: usize = count.parse().map_err(|_| unknown())?;
            if n == 0 {
                return Err(Error::invalid(
                    "average-compress needs at least one iteration",
                ));
            }
            Some(n)
        };
        Ok(Method {
            base,
            compressor: Some(compressor),
            iterations,
        })
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.to_string()
    }
}
