use crate::error::{Error, Result};
use crate::poset::{ladder_levels, Level, Poset};
use crate::symmat::{LinearForm, Polynomial};
use serde::Serialize;

/// An eigenvalue of a ladder's transition matrix with an explicit eigenvector.
///
/// `vector` is indexed like the basis of [`crate::symmat::ladder_matrix`]:
/// one tensor factor per two-element level, bottom level most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderEigenPair {
    pub value: LinearForm,
    #[serde(serialize_with = "serialize_polys")]
    pub vector: Vec<Polynomial>,
}

fn serialize_polys<S: serde::Serializer>(
    v: &[Polynomial],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

/// All branch choices of the level-by-level construction: a one-element level
/// `{a}` adds `x_a`; a pair `{a,b}` either adds `x_a + x_b` with factor `(1,1)`
/// or negates the running value `c` with factor `(−x_a − c, x_b + c)`.
///
/// The result has one pair per linear extension, so the matrix is diagonalizable.
pub fn ladder_eigensystem(p: &Poset) -> Result<Vec<LadderEigenPair>> {
    let levels = ladder_levels(p).ok_or_else(|| Error::Class("not a ladder".into()))?;
    let n = p.n();
    let mut partial = vec![(LinearForm::zero(n), vec![Polynomial::constant(n, 1)])];
    for level in &levels {
        match *level {
            Level::Single(a) => {
                for (c, _) in partial.iter_mut() {
                    *c += &LinearForm::var(n, a);
                }
            }
            Level::Pair(a, b) => {
                let mut next = Vec::with_capacity(2 * partial.len());
                for (c, v) in partial {
                    let one = Polynomial::constant(n, 1);
                    next.push((
                        c.clone() + LinearForm::sum_of(n, [a, b]),
                        tensor(&v, &[one.clone(), one]),
                    ));
                    let lo = -(LinearForm::var(n, a) + c.clone());
                    let hi = LinearForm::var(n, b) + c.clone();
                    next.push((
                        -c,
                        tensor(
                            &v,
                            &[Polynomial::from_form(&lo), Polynomial::from_form(&hi)],
                        ),
                    ));
                }
                partial = next;
            }
        }
    }
    Ok(partial
        .into_iter()
        .map(|(value, vector)| LadderEigenPair { value, vector })
        .collect())
}

fn tensor(u: &[Polynomial], w: &[Polynomial]) -> Vec<Polynomial> {
    u.iter()
        .flat_map(|x| w.iter().map(move |y| x * y))
        .collect()
}
