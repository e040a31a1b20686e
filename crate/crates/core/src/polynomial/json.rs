use serde::{Deserialize, Serialize};

use super::{ExponentVector, Polynomial};
use crate::error::{Error, Result};
use crate::Rational;

/// `{"n": 2, "terms": [{"c": "-2", "e": [2, 0]}, ...]}`; coefficients are
/// integer or `p/q` strings, terms in canonical (increasing lex) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        Self {
            n: p.num_vars(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    c: c.to_string(),
                    e: e.entries().to_vec(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;

    fn try_from(j: &PolynomialJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let c: Rational =
                    t.c.trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad rational coefficient {:?}", t.c)))?;
                Ok((ExponentVector::new(t.e.clone())?, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(j.n, terms)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        Polynomial::try_from(&j).map_err(serde::de::Error::custom)
    }
}
