use super::{char_poly, LinearForm, UniPoly};
use crate::error::{Error, Result};
use crate::linext::{ExtensionTable, LinearExtension};
use crate::poset::{breakable_pairs, ladder_levels, Level, Poset};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Square matrix of linear forms, row-major. `basis` lists the extensions
/// indexing rows and columns; it is empty for matrices not tied to a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    n_vars: usize,
    dim: usize,
    entries: Vec<LinearForm>,
    basis: Vec<LinearExtension>,
}

impl SymbolicMatrix {
    pub fn new(n_vars: usize, dim: usize, entries: Vec<LinearForm>) -> Result<SymbolicMatrix> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|f| f.n_vars() != n_vars) {
            return Err(Error::Dimension {
                expected: n_vars,
                got: bad.n_vars(),
            });
        }
        Ok(SymbolicMatrix {
            n_vars,
            dim,
            entries,
            basis: Vec::new(),
        })
    }

    pub fn zeros(n_vars: usize, dim: usize) -> SymbolicMatrix {
        SymbolicMatrix {
            n_vars,
            dim,
            entries: vec![LinearForm::zero(n_vars); dim * dim],
            basis: Vec::new(),
        }
    }

    pub fn with_basis(mut self, basis: Vec<LinearExtension>) -> Result<SymbolicMatrix> {
        if basis.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: basis.len(),
            });
        }
        self.basis = basis;
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[LinearExtension] {
        &self.basis
    }

    pub fn get(&self, r: usize, c: usize) -> &LinearForm {
        &self.entries[r * self.dim + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut LinearForm {
        &mut self.entries[r * self.dim + c]
    }

    pub fn row(&self, r: usize) -> &[LinearForm] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn row_sums(&self) -> Vec<LinearForm> {
        (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .fold(LinearForm::zero(self.n_vars), |acc, f| acc + f.clone())
            })
            .collect()
    }

    /// `G_k`: the integer matrix of coefficients of `x_k`.
    pub fn coefficient_matrix(&self, k: usize) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|r| self.row(r).iter().map(|f| f.coeff(k)).collect())
            .collect()
    }

    /// Integer matrix obtained by substituting integers `a` for the variables.
    pub fn eval_int(&self, a: &[i64]) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|f| i64::try_from(f.eval_int(a)).expect("entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    /// Rows and columns reordered so that new index `i` is old index `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> SymbolicMatrix {
        assert_eq!(order.len(), self.dim);
        let mut entries = Vec::with_capacity(self.entries.len());
        for &r in order {
            for &c in order {
                entries.push(self.get(r, c).clone());
            }
        }
        SymbolicMatrix {
            n_vars: self.n_vars,
            dim: self.dim,
            entries,
            basis: if self.basis.is_empty() {
                Vec::new()
            } else {
                order.iter().map(|&i| self.basis[i].clone()).collect()
            },
        }
    }

    /// The same matrix expressed in `target`, a reordering of the current basis.
    pub fn in_basis(&self, target: &[LinearExtension]) -> Result<SymbolicMatrix> {
        let order = target
            .iter()
            .map(|e| {
                self.basis
                    .iter()
                    .position(|b| b == e)
                    .ok_or_else(|| Error::Range(format!("{e} is not in the basis")))
            })
            .collect::<Result<Vec<_>>>()?;
        if order.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: order.len(),
            });
        }
        Ok(self.permuted(&order))
    }

    /// `S·M` for an integer matrix `S`.
    pub fn left_mul(&self, s: &[Vec<i64>]) -> SymbolicMatrix {
        let mut out = SymbolicMatrix::zeros(self.n_vars, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                if s[i][k] == 0 {
                    continue;
                }
                for j in 0..self.dim {
                    let add = self.get(k, j).scale(s[i][k]);
                    *out.get_mut(i, j) += &add;
                }
            }
        }
        out
    }

    /// `M·S` for an integer matrix `S`.
    pub fn right_mul(&self, s: &[Vec<i64>]) -> SymbolicMatrix {
        let mut out = SymbolicMatrix::zeros(self.n_vars, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                for j in 0..self.dim {
                    if s[k][j] != 0 {
                        let add = self.get(i, k).scale(s[k][j]);
                        *out.get_mut(i, j) += &add;
                    }
                }
            }
        }
        out
    }

    /// `M + f·I`.
    pub fn plus_scalar(&self, f: &LinearForm) -> SymbolicMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            *out.get_mut(i, i) += f;
        }
        out
    }
}

/// `M^P`: entry `(π, π′)` is the sum of `x_{π_i}` over positions `i` with `∂_i π = π′`.
pub fn transition_matrix(p: &Poset) -> Result<SymbolicMatrix> {
    let table = ExtensionTable::build(p)?;
    Ok(transition_from_table(p.n(), &table))
}

pub fn transition_from_table(n: usize, table: &ExtensionTable) -> SymbolicMatrix {
    let dim = table.len();
    let mut m = SymbolicMatrix::zeros(n, dim);
    for (s, row) in table.hat.iter().enumerate() {
        for (k0, &t) in row.iter().enumerate() {
            let f = m.get_mut(s, t);
            f.set_coeff(k0 + 1, f.coeff(k0 + 1) + 1);
        }
    }
    m.basis = table.extensions.clone();
    m
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(dim: usize, entries: Vec<BigRational>) -> Result<RationalMatrix> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(RationalMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Row vector times matrix, `w·M`.
    pub fn left_apply(&self, w: &[BigRational]) -> Result<Vec<BigRational>> {
        if w.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: w.len(),
            });
        }
        let mut out = vec![BigRational::zero(); self.dim];
        for (r, wr) in w.iter().enumerate() {
            if wr.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let e = self.get(r, c);
                if !e.is_zero() {
                    *o += wr * e;
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, `M·v`.
    pub fn right_apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .filter(|&c| !self.get(r, c).is_zero())
                    .map(|c| self.get(r, c) * &v[c])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect())
    }

    /// `det(λI − M)`.
    pub fn char_poly(&self) -> UniPoly {
        char_poly(self)
    }
}

/// Substitutes the strictly positive rationals `x` into every entry.
pub fn evaluate(m: &SymbolicMatrix, x: &[BigRational]) -> Result<RationalMatrix> {
    if x.len() != m.n_vars {
        return Err(Error::Dimension {
            expected: m.n_vars,
            got: x.len(),
        });
    }
    if let Some(i) = x.iter().position(|v| !v.is_positive()) {
        return Err(Error::NonPositive(i + 1));
    }
    Ok(RationalMatrix {
        dim: m.dim,
        entries: m.entries.iter().map(|f| f.eval(x)).collect(),
    })
}

/// `Σ_t I ⊗ ⋯ ⊗ I ⊗ B_t ⊗ J ⊗ ⋯ ⊗ J` over the levels of a ladder (bottom first).
///
/// A one-element level `{a}` contributes `B = (x_a)`; a two-element level
/// `{a<b}` contributes `B = [[x_b, x_a], [x_b, x_a]]` on the basis `(ab, ba)`.
/// The first tensor factor is the bottom level, and the basis word of a tensor
/// index concatenates the level words bottom to top.
pub fn kron_assemble(n: usize, levels: &[Level]) -> Result<SymbolicMatrix> {
    let mut seen = vec![false; n + 1];
    for l in levels {
        for x in l.elements() {
            if x == 0 || x > n || seen[x] {
                return Err(Error::Class(format!("levels do not partition 1..={n}")));
            }
            seen[x] = true;
        }
    }
    if seen[1..].iter().any(|s| !s) {
        return Err(Error::Class(format!("levels do not partition 1..={n}")));
    }

    // Bit position of each pair level, most significant = bottom level.
    let pairs: Vec<usize> = (0..levels.len())
        .filter(|&t| matches!(levels[t], Level::Pair(..)))
        .collect();
    let q = pairs.len();
    let bit_of = |t: usize| pairs.iter().position(|&u| u == t).map(|r| q - 1 - r);
    let dim = 1usize << q;

    let mut m = SymbolicMatrix::zeros(n, dim);
    for i in 0..dim {
        for (t, level) in levels.iter().enumerate() {
            // Levels above t are flipped, levels below are kept.
            let mut j = i;
            for &u in pairs.iter().filter(|&&u| u > t) {
                j ^= 1 << bit_of(u).unwrap();
            }
            match *level {
                Level::Single(a) => {
                    let f = m.get_mut(i, j);
                    f.set_coeff(a, f.coeff(a) + 1);
                }
                Level::Pair(a, b) => {
                    let bt = 1 << bit_of(t).unwrap();
                    for (col, var) in [(j & !bt, b), (j | bt, a)] {
                        let f = m.get_mut(i, col);
                        f.set_coeff(var, f.coeff(var) + 1);
                    }
                }
            }
        }
    }

    let basis = (0..dim)
        .map(|i| {
            let mut word = Vec::with_capacity(n);
            for (t, level) in levels.iter().enumerate() {
                match *level {
                    Level::Single(a) => word.push(a),
                    Level::Pair(a, b) => {
                        if i >> bit_of(t).unwrap() & 1 == 0 {
                            word.extend([a, b]);
                        } else {
                            word.extend([b, a]);
                        }
                    }
                }
            }
            LinearExtension::from_vec(word)
        })
        .collect();
    m.basis = basis;
    Ok(m)
}

/// [`kron_assemble`] for a poset that is a ladder.
pub fn ladder_matrix(p: &Poset) -> Result<SymbolicMatrix> {
    let levels = ladder_levels(p).ok_or_else(|| Error::Class("not a ladder".into()))?;
    kron_assemble(p.n(), &levels)
}

/// `∂_{a,b} M`: every entry becomes a 2×2 block.
///
/// Writing the entry as `Σ c_k x_k`, the terms with `k ≺ a` go to the
/// anti-diagonal, the terms with `k ⋠ b` to the diagonal, `c_a x_a` becomes
/// `[[0, c_a x_a], [c_a x_b, 0]]` and `c_b x_b` becomes `[[c_b x_b, 0], [0, c_b x_a]]`.
/// The basis lists `π` followed by `π` with `a` and `b` exchanged.
pub fn expand_ab(m: &SymbolicMatrix, p: &Poset, pair: (usize, usize)) -> Result<SymbolicMatrix> {
    let (a, b) = pair;
    if !breakable_pairs(p).contains(&pair) {
        return Err(Error::Pair(a, b));
    }
    if m.n_vars != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: m.n_vars,
        });
    }
    let n = m.n_vars;
    let dim = m.dim;
    let mut out = SymbolicMatrix::zeros(n, 2 * dim);
    for r in 0..dim {
        for c in 0..dim {
            let e = m.get(r, c);
            if e.is_zero() {
                continue;
            }
            let low = e.restrict(|k| p.lt(k, a));
            let far = e.restrict(|k| !p.le(k, b));
            let (ca, cb) = (e.coeff(a), e.coeff(b));
            let (rr, cc) = (2 * r, 2 * c);

            let mut d0 = far.clone();
            d0.set_coeff(b, d0.coeff(b) + cb);
            let mut d1 = far;
            d1.set_coeff(a, d1.coeff(a) + cb);
            let mut o01 = low.clone();
            o01.set_coeff(a, o01.coeff(a) + ca);
            let mut o10 = low;
            o10.set_coeff(b, o10.coeff(b) + ca);

            *out.get_mut(rr, cc) = d0;
            *out.get_mut(rr + 1, cc + 1) = d1;
            *out.get_mut(rr, cc + 1) = o01;
            *out.get_mut(rr + 1, cc) = o10;
        }
    }
    if !m.basis.is_empty() {
        out.basis = m
            .basis
            .iter()
            .flat_map(|pi| {
                let swapped: Vec<usize> = pi
                    .word()
                    .iter()
                    .map(|&l| {
                        if l == a {
                            b
                        } else if l == b {
                            a
                        } else {
                            l
                        }
                    })
                    .collect();
                [pi.clone(), LinearExtension::from_vec(swapped)]
            })
            .collect();
    }
    Ok(out)
}
