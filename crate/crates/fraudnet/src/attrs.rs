//! Entity attribute bags and the small predicate language used by factor
//! configs: (attribute, comparator, value) triples joined by conjunction.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

pub type AttrMap = BTreeMap<String, AttrValue>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// One (attribute, comparator, value) condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub attribute: String,
    pub comparator: Comparator,
    pub value: AttrValue,
}

impl Condition {
    pub fn holds(&self, attrs: &AttrMap) -> bool {
        let Some(actual) = attrs.get(&self.attribute) else {
            return false;
        };
        match (numeric(actual), numeric(&self.value)) {
            (Some(a), Some(b)) => compare_ord(self.comparator, a.partial_cmp(&b)),
            _ => match (actual, &self.value) {
                (AttrValue::Bool(a), AttrValue::Bool(b)) => {
                    compare_ord(self.comparator, a.partial_cmp(b))
                }
                (AttrValue::Text(a), AttrValue::Text(b)) => {
                    compare_ord(self.comparator, a.partial_cmp(b))
                }
                _ => false,
            },
        }
    }
}

fn numeric(v: &AttrValue) -> Option<f64> {
    match v {
        AttrValue::Int(i) => Some(*i as f64),
        AttrValue::Float(f) => Some(*f),
        _ => None,
    }
}

fn compare_ord(cmp: Comparator, ord: Option<std::cmp::Ordering>) -> bool {
    use std::cmp::Ordering::*;
    let Some(ord) = ord else { return false };
    match cmp {
        Comparator::Eq => ord == Equal,
        Comparator::Ne => ord != Equal,
        Comparator::Lt => ord == Less,
        Comparator::Le => ord != Greater,
        Comparator::Gt => ord == Greater,
        Comparator::Ge => ord != Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attrs(pairs: &[(&str, AttrValue)]) -> AttrMap {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn numeric_comparisons_mix_int_and_float() {
        let a = attrs(&[("age", AttrValue::Int(25))]);
        let cond = Condition {
            attribute: "age".into(),
            comparator: Comparator::Lt,
            value: AttrValue::Float(30.0),
        };
        assert!(cond.holds(&a));
    }

    #[test]
    fn missing_attribute_never_matches() {
        let cond = Condition {
            attribute: "sex".into(),
            comparator: Comparator::Eq,
            value: AttrValue::Text("male".into()),
        };
        assert!(!cond.holds(&AttrMap::new()));
    }

    #[test]
    fn type_mismatch_never_matches() {
        let a = attrs(&[("night", AttrValue::Bool(true))]);
        let cond = Condition {
            attribute: "night".into(),
            comparator: Comparator::Eq,
            value: AttrValue::Text("true".into()),
        };
        assert!(!cond.holds(&a));
    }
}
