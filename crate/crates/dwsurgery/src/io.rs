//! File formats: group specs, cocycle files, and the invariant report.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{CoeffValue, FiniteGroup, GroupSpec};
use crate::bar::{h3_generators, Cochain3};
use crate::diagram::SurgeryPresentation;
use crate::engine::{DwResult, RepRecord};
use crate::error::{Error, Result};

/// Accepts a JSON spec (`{"kind":"dihedral","n":5}`) or a short name: `Z5`, `Z/5`, `D5`,
/// `S3`, `Q8`, `1`, and products joined by `x` such as `Z2xZ2`.
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(format!("group spec: {e}")));
        }
        let factors: Vec<&str> = s.split(['x', '×']).map(str::trim).collect();
        if factors.len() > 1 {
            return Ok(GroupSpec::Product { factors: factors.into_iter().map(str::parse).collect::<Result<_>>()? });
        }
        let bad = || Error::Parse(format!("unknown group {s:?}"));
        let num = |t: &str| t.trim_start_matches('/').parse::<usize>().map_err(|_| bad());
        match s {
            "1" | "trivial" => Ok(GroupSpec::Cyclic { n: 1 }),
            "Q8" => Ok(GroupSpec::Quaternion),
            _ if s.starts_with('Z') => Ok(GroupSpec::Cyclic { n: num(&s[1..])? }),
            _ if s.starts_with('D') => Ok(GroupSpec::Dihedral { n: num(&s[1..])? }),
            _ if s.starts_with('S') => Ok(GroupSpec::Symmetric { n: num(&s[1..])? }),
            _ => Err(bad()),
        }
    }
}

/// On-disk description of a 3-cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case")]
pub enum CocycleFile {
    Zero,
    /// `k·a·⌊(b+c)/n⌋/n` on ℤ/n.
    CyclicStandard { k: i64 },
    /// `multiple` times generator `index` of H³ with coefficients `(1/m)ℤ/ℤ`.
    Generator { m: u64, index: usize, #[serde(default = "one")] multiple: i64 },
    /// All `|Γ|³` values in index order `(x·n + y)·n + z`.
    Table { values: Vec<CoeffValue> },
}

fn one() -> i64 {
    1
}

impl CocycleFile {
    pub fn from_table(c: &Cochain3) -> Self {
        CocycleFile::Table { values: c.values() }
    }

    /// Parses a request string `zero`, `std:K`, `gen:I` or `gen:I*K` (generator modulus |Γ|).
    pub fn from_request(s: &str, group_order: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid cocycle request {s:?}"));
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        match s.trim() {
            "zero" => Ok(CocycleFile::Zero),
            t if t.starts_with("std:") => Ok(CocycleFile::CyclicStandard { k: int(&t[4..])? }),
            t if t.starts_with("gen:") => {
                let (i, k) = t[4..].split_once('*').unwrap_or((&t[4..], "1"));
                Ok(CocycleFile::Generator { m: group_order as u64, index: int(i)? as usize, multiple: int(k)? })
            }
            _ => Err(bad()),
        }
    }

    pub fn load(&self, group: &Arc<FiniteGroup>) -> Result<Cochain3> {
        match self {
            CocycleFile::Zero => Ok(Cochain3::zero(group.clone())),
            CocycleFile::CyclicStandard { k } => Cochain3::cyclic_standard(group.clone(), *k),
            CocycleFile::Generator { m, index, multiple } => {
                let gens = h3_generators(group, *m)?;
                let g = gens.get(*index).ok_or_else(|| {
                    Error::Validation(format!("H³ has {} generator(s); index {index} requested", gens.len()))
                })?;
                Ok(g.cocycle.scale(*multiple))
            }
            CocycleFile::Table { values } => Cochain3::from_values(group.clone(), values),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifoldSection {
    pub diagram: String,
    pub surgery: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSection {
    pub name: String,
    pub order: usize,
    pub spec: GroupSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleSection {
    pub den: u64,
    /// Whether the input had to be replaced by a strongly normalized representative.
    pub normalized: bool,
    pub values: Vec<CoeffValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    /// `(1/|Γ|)·Σ mult·e(F)` with `e(x) = exp(2πix)`.
    pub exact: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueCount {
    #[serde(rename = "F")]
    pub value: CoeffValue,
    #[serde(rename = "F_float")]
    pub float: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub colorings: usize,
    pub representations: usize,
    pub distinct_values: usize,
}

/// The invariant report written by the command line tool.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifold: ManifoldSection,
    pub group: GroupSection,
    pub cocycle: CocycleSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<Vec<RepRecord>>,
    pub values: Vec<ValueCount>,
    pub dw: ComplexValue,
    pub counts: Counts,
}

impl Report {
    pub fn new(surgery: &SurgeryPresentation, alpha: &Cochain3, normalized: bool, dw: DwResult) -> Self {
        let g = alpha.group();
        Report {
            manifold: ManifoldSection {
                diagram: surgery.diagram.to_string(),
                surgery: surgery.coefficients.iter().map(|c| c.to_string()).collect(),
            },
            group: GroupSection { name: g.name().to_string(), order: g.order(), spec: g.spec().clone() },
            cocycle: CocycleSection { den: alpha.den(), normalized, values: alpha.values() },
            reps: dw.reps,
            counts: Counts { colorings: dw.colorings, representations: dw.survivors, distinct_values: dw.values.len() },
            dw: ComplexValue { re: clean(dw.total.re), im: clean(dw.total.im), exact: exact_sum(g.order(), &dw.values) },
            values: dw
                .values
                .into_iter()
                .map(|(value, multiplicity)| ValueCount { float: value.to_f64(), value, multiplicity })
                .collect(),
        }
    }
}

fn exact_sum(order: usize, values: &[(CoeffValue, usize)]) -> String {
    if values.is_empty() {
        return "0".to_string();
    }
    let terms: Vec<String> = values
        .iter()
        .map(|(v, k)| match (v.is_zero(), k) {
            (true, _) => k.to_string(),
            (false, 1) => format!("e({v})"),
            (false, _) => format!("{k}·e({v})"),
        })
        .collect();
    format!("(1/{order})·({})", terms.join(" + "))
}

/// Rounds away floating noise below `1e-12` so repeated runs print identical numbers.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Machine-readable error payload.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport { error: ErrorBody { kind: e.kind(), message: e.to_string() } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names() {
        assert_eq!("Z5".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic { n: 5 });
        assert_eq!("Z/5".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic { n: 5 });
        assert_eq!("D4".parse::<GroupSpec>().unwrap(), GroupSpec::Dihedral { n: 4 });
        assert_eq!(
            "Z2xZ2".parse::<GroupSpec>().unwrap(),
            GroupSpec::Product { factors: vec![GroupSpec::Cyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }] }
        );
        assert_eq!(r#"{"kind":"quaternion"}"#.parse::<GroupSpec>().unwrap(), GroupSpec::Quaternion);
        assert!("G7".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn cocycle_requests() {
        assert_eq!(CocycleFile::from_request("gen:0*2", 5).unwrap(), CocycleFile::Generator { m: 5, index: 0, multiple: 2 });
        assert_eq!(CocycleFile::from_request("std:3", 5).unwrap(), CocycleFile::CyclicStandard { k: 3 });
        let json = serde_json::to_string(&CocycleFile::Generator { m: 5, index: 0, multiple: 1 }).unwrap();
        assert_eq!(json, r#"{"format":"generator","m":5,"index":0,"multiple":1}"#);
        let g = Arc::new(FiniteGroup::new(&GroupSpec::Cyclic { n: 3 }).unwrap());
        let t = CocycleFile::from_table(&Cochain3::cyclic_standard(g.clone(), 1).unwrap());
        let back: CocycleFile = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back.load(&g).unwrap(), Cochain3::cyclic_standard(g, 1).unwrap());
    }
}
