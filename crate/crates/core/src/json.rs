//! JSON interchange: forms, matrices, octonions and group files.
//!
//! Rationals travel as `"p/q"` (or `"p"`) strings so that nothing is lost.

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{Form, OrthMap, Vector};
use crate::groups::FiniteGroup;
use crate::octonion::Octonion;
use crate::Rational;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: num_bigint::BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: num_bigint::BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d == 0.into() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n: num_bigint::BigInt = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Ok(Rational::from_integer(n))
    }
}

pub fn rational_string(x: &Rational) -> String {
    x.to_string()
}

pub(crate) fn ser_opt_rational<S: Serializer>(
    x: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_opt_rationals<S: Serializer>(
    xs: &[Option<Rational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.as_ref().map(|r| r.to_string()))?;
    }
    seq.end()
}

pub(crate) fn ser_vectors<S: Serializer>(
    vs: &[Vector],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        let row: Vec<String> = v.components().iter().map(rational_string).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub coef: String,
}

/// `{"dim":7,"degree":3,"terms":[{"idx":[1,2,7],"coef":"1"},...]}`; `idx`
/// holds basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Form> for FormJson {
    fn from(f: &Form) -> Self {
        FormJson {
            dim: f.dim(),
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(i, c)| TermJson {
                    idx: i.labels(f.dim()),
                    coef: rational_string(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&FormJson> for Form {
    type Error = Error;
    fn try_from(j: &FormJson) -> Result<Form> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.idx.clone(), parse_rational(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        for (idx, _) in &terms {
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndex {
                    labels: idx.clone(),
                    dim: j.dim,
                });
            }
        }
        Form::from_labeled_terms(j.dim, j.degree, terms)
    }
}

/// `{"dim":8,"rows":[["1","0",...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthMapJson {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

impl From<&OrthMap> for OrthMapJson {
    fn from(m: &OrthMap) -> Self {
        OrthMapJson {
            dim: m.dim(),
            rows: (0..m.dim())
                .map(|i| m.row(i).iter().map(rational_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<&OrthMapJson> for OrthMap {
    type Error = Error;
    fn try_from(j: &OrthMapJson) -> Result<OrthMap> {
        if j.rows.len() != j.dim {
            return Err(Error::DimensionMismatch {
                expected: j.dim,
                found: j.rows.len(),
            });
        }
        let rows = j
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OrthMap::from_rows(rows)
    }
}

/// Array of 8 rational strings.
pub type OctonionJson = Vec<String>;

pub fn octonion_to_json(x: &Octonion) -> OctonionJson {
    x.components().iter().map(rational_string).collect()
}

pub fn octonion_from_json(j: &[String]) -> Result<Octonion> {
    if j.len() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: j.len(),
        });
    }
    let v = j
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    Octonion::from_vector(&Vector::new(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub label: String,
    pub matrix: OrthMapJson,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMetadata {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<OctonionJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<usize>,
}

/// Group file: generators, every element with its word label, metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub dim: usize,
    pub order: usize,
    pub generators: Vec<OrthMapJson>,
    #[serde(default)]
    pub elements: Vec<ElementJson>,
    #[serde(default)]
    pub metadata: GroupMetadata,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup, metadata: GroupMetadata) -> Self {
        GroupFile {
            dim: g.dim(),
            order: g.order(),
            generators: g.generators().iter().map(OrthMapJson::from).collect(),
            elements: g
                .elements()
                .iter()
                .zip(g.labels())
                .map(|(m, l)| ElementJson {
                    label: l.clone(),
                    matrix: m.into(),
                })
                .collect(),
            metadata,
        }
    }

    /// Rebuilds the group. Listed elements are checked for the group axioms;
    /// without them the group is regenerated from the generators.
    pub fn to_group(&self, cap: usize) -> Result<FiniteGroup> {
        let gens = self
            .generators
            .iter()
            .map(OrthMap::try_from)
            .collect::<Result<Vec<_>>>()?;
        let group = if self.elements.is_empty() {
            crate::groups::closure(&gens, cap)?
        } else {
            let elems = self
                .elements
                .iter()
                .map(|e| OrthMap::try_from(&e.matrix))
                .collect::<Result<Vec<_>>>()?;
            let labels = self.elements.iter().map(|e| e.label.clone()).collect();
            FiniteGroup::from_elements(elems, gens, Some(labels))?
        };
        if group.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: group.dim(),
            });
        }
        if group.order() != self.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: group.order(),
            });
        }
        Ok(group)
    }
}

/// Generator files: either a bare list of matrices or `{"generators": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorsJson {
    List(Vec<OrthMapJson>),
    Wrapped { generators: Vec<OrthMapJson> },
}

pub fn parse_generators(text: &str) -> Result<Vec<OrthMap>> {
    let list = match serde_json::from_str::<GeneratorsJson>(text)? {
        GeneratorsJson::List(l) | GeneratorsJson::Wrapped { generators: l } => l,
    };
    list.iter().map(OrthMap::try_from).collect()
}

pub fn parse_frame(text: &str) -> Result<Vec<Octonion>> {
    let list: Vec<OctonionJson> = serde_json::from_str(text)?;
    list.iter().map(|o| octonion_from_json(o)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{g2_form, spin7_form};
    use crate::{q, ratio};

    #[test]
    fn form_schema_matches_contract() {
        let j = serde_json::to_string(&FormJson::from(&g2_form())).unwrap();
        assert!(
            j.starts_with(r#"{"dim":7,"degree":3,"terms":[{"idx":[1,2,7],"coef":"1"}"#),
            "{j}"
        );
        let f = Form::monomial(8, &[0, 3], ratio(-3, 4)).unwrap();
        let j = serde_json::to_string(&FormJson::from(&f)).unwrap();
        assert_eq!(
            j,
            r#"{"dim":8,"degree":2,"terms":[{"idx":[0,3],"coef":"-3/4"}]}"#
        );
    }

    #[test]
    fn form_json_rejects_unsorted_or_bad() {
        let bad: FormJson =
            serde_json::from_str(r#"{"dim":7,"degree":2,"terms":[{"idx":[2,1],"coef":"1"}]}"#)
                .unwrap();
        assert!(Form::try_from(&bad).is_err());
        let bad: FormJson =
            serde_json::from_str(r#"{"dim":7,"degree":2,"terms":[{"idx":[1,2],"coef":"1/0"}]}"#)
                .unwrap();
        assert!(Form::try_from(&bad).is_err());
        let bad: FormJson =
            serde_json::from_str(r#"{"dim":7,"degree":2,"terms":[{"idx":[0,2],"coef":"1"}]}"#)
                .unwrap();
        assert!(Form::try_from(&bad).is_err());
    }

    #[test]
    fn orthmap_schema() {
        let m = OrthMap::signed_permutation(&[1, 0], &[1, -1]);
        let j = serde_json::to_string(&OrthMapJson::from(&m)).unwrap();
        assert_eq!(j, r#"{"dim":2,"rows":[["0","-1"],["1","0"]]}"#);
        let back = OrthMap::try_from(&serde_json::from_str::<OrthMapJson>(&j).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn generators_both_shapes() {
        let m = OrthMapJson::from(&OrthMap::identity(2));
        let list = serde_json::to_string(&vec![m.clone()]).unwrap();
        let wrapped = format!(r#"{{"generators":{list}}}"#);
        assert_eq!(parse_generators(&list).unwrap().len(), 1);
        assert_eq!(parse_generators(&wrapped).unwrap().len(), 1);
    }

    #[test]
    fn octonion_json() {
        let x = Octonion::from_integers([1, 0, 0, 0, 0, 0, 0, -2]).scale(&ratio(1, 3));
        let j = octonion_to_json(&x);
        assert_eq!(j[0], "1/3");
        assert_eq!(octonion_from_json(&j).unwrap(), x);
        assert!(octonion_from_json(&j[..7]).is_err());
    }

    #[test]
    fn spin7_form_roundtrip() {
        let f = spin7_form();
        assert_eq!(Form::try_from(&FormJson::from(&f)).unwrap(), f);
    }
}
