//! The JSON record emitted by every identity check.

use serde::{Deserialize, Serialize};

use crate::rational::fmt_q;
use crate::symfunc::Discrepancy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyJson {
    pub degree: usize,
    pub partition: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

impl From<&Discrepancy> for DiscrepancyJson {
    fn from(d: &Discrepancy) -> Self {
        Self {
            degree: d.partition.size(),
            partition: d.partition.parts().to_vec(),
            lhs: fmt_q(&d.lhs),
            rhs: fmt_q(&d.rhs),
        }
    }
}

/// `{"check", "max_degree", "status", "first_discrepancy"}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub max_degree: usize,
    pub status: Status,
    pub first_discrepancy: Option<DiscrepancyJson>,
}

impl CheckReport {
    pub fn from_discrepancy(check: &str, max_degree: usize, d: Option<Discrepancy>) -> Self {
        Self {
            check: check.to_string(),
            max_degree,
            status: if d.is_some() {
                Status::Fail
            } else {
                Status::Ok
            },
            first_discrepancy: d.as_ref().map(DiscrepancyJson::from),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }
}
