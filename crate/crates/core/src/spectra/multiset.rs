use crate::error::{Error, Result};
use crate::symmat::LinearForm;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A predicted spectrum: canonical eigenvalue forms with positive multiplicities.
/// Equal forms arising from different sources merge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueMultiset {
    n: usize,
    entries: BTreeMap<LinearForm, usize>,
}

impl EigenvalueMultiset {
    pub fn new(n_vars: usize) -> EigenvalueMultiset {
        EigenvalueMultiset {
            n: n_vars,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `m` to the multiplicity of `value`; `m = 0` is ignored.
    pub fn insert(&mut self, value: LinearForm, m: usize) {
        assert_eq!(
            value.n_vars(),
            self.n,
            "eigenvalue over the wrong variables"
        );
        if m > 0 {
            *self.entries.entry(value).or_insert(0) += m;
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, value: &LinearForm) -> usize {
        self.entries.get(value).copied().unwrap_or(0)
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LinearForm, usize)> {
        self.entries.iter().map(|(f, &m)| (f, m))
    }

    pub fn values(&self) -> impl Iterator<Item = &LinearForm> {
        self.entries.keys()
    }

    /// Largest absolute coefficient over all eigenvalues.
    pub fn max_abs_coeff(&self) -> i64 {
        self.entries
            .keys()
            .flat_map(|f| f.coeffs().iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Fails with a multiplicity error unless the total equals `expected`.
    pub fn check_total(&self, expected: usize) -> Result<()> {
        let got = self.total();
        if got == expected {
            Ok(())
        } else {
            Err(Error::Multiplicity { expected, got })
        }
    }

    /// Parses lines `form<TAB>multiplicity` (or whitespace separated); blank lines
    /// and `#` comments are skipped.
    pub fn parse(src: &str, n: usize) -> Result<EigenvalueMultiset> {
        let mut out = EigenvalueMultiset::new(n);
        for line in src.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (form, mult) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("expected `form multiplicity`: {line}")))?;
            let m: usize = mult
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity: {mult}")))?;
            out.insert(LinearForm::parse(form.trim(), n)?, m);
        }
        Ok(out)
    }
}

impl fmt::Display for EigenvalueMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, m) in &self.entries {
            writeln!(f, "{v}\t{m}")?;
        }
        Ok(())
    }
}

struct Entries<'a>(&'a BTreeMap<LinearForm, usize>);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            value: &'a LinearForm,
            multiplicity: usize,
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (value, &multiplicity) in self.0 {
            seq.serialize_element(&Entry {
                value,
                multiplicity,
            })?;
        }
        seq.end()
    }
}

impl Serialize for EigenvalueMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EigenvalueMultiset", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("total", &self.total())?;
        st.serialize_field("eigenvalues", &Entries(&self.entries))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_round_trip() {
        let mut s = EigenvalueMultiset::new(3);
        s.insert(LinearForm::parse("x3", 3).unwrap(), 1);
        s.insert(LinearForm::parse("x3", 3).unwrap(), 2);
        s.insert(LinearForm::zero(3), 0);
        assert_eq!(s.len(), 1);
        assert_eq!(s.total(), 3);
        let text = s.to_string();
        assert_eq!(text, "x3\t3\n");
        assert_eq!(EigenvalueMultiset::parse(&text, 3).unwrap(), s);
        assert_eq!(
            s.check_total(4),
            Err(Error::Multiplicity {
                expected: 4,
                got: 3
            })
        );
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"n":3,"total":3,"eigenvalues":[{"value":"x3","multiplicity":3}]}"#
        );
    }
}
