//! Exact arithmetic for finitely generated abelian groups: integer matrices,
//! Smith normal form, cokernels, Hom/Ext/Tensor/Tor against cyclic groups and
//! universal-coefficient conversions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("matrix shape {0}x{1} does not match generator counts {2}x{3}")]
    MorphismShape(usize, usize, usize, usize),
    #[error("column {col} violates torsion: generator of order {order} maps outside the {order}-torsion of the target")]
    TorsionViolation { col: usize, order: BigInt },
    #[error("torsion entry {0} is invalid (must be >= 2)")]
    BadTorsion(BigInt),
    #[error("homology unknown in degree {0}")]
    MissingDegree(usize),
    #[error("cannot compose: {0} source generators vs {1} target generators")]
    ComposeMismatch(usize, usize),
}

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AbelianError> {
        if entries.len() != rows * cols {
            return Err(AbelianError::ShapeMismatch {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        IntMatrix::new(
            rows,
            cols,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .expect("literal shape")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
            for j in 0..other.cols {
                *out.at_mut(i, self.cols + j) = other.at(i, j).clone();
            }
        }
        out
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> IntMatrix {
        let mut out = IntMatrix::zero(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                *out.at_mut(i, j) = c[i].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination. Exact.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

/// Smith normal form: returns (U, D, V) with U * M * V = D, U and V unimodular,
/// D diagonal with nonnegative entries in a divisibility chain d1 | d2 | ...
/// (trailing zeros last). Pivot choice is the smallest nonzero absolute value,
/// ties broken by lowest (row, col), so the result is deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let steps = m.rows.min(m.cols);

    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = min_abs_pivot(&a, t) else {
                break 'outer;
            };
            if pi != t {
                swap_rows(&mut a, &mut u, t, pi);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, t, pj);
            }
            let mut dirty = false;
            for i in t + 1..a.rows {
                if !a.at(i, t).is_zero() {
                    let q = div_round(a.at(i, t), a.at(t, t));
                    if !q.is_zero() {
                        row_sub(&mut a, &mut u, i, t, &q);
                    }
                    if !a.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..a.cols {
                if !a.at(t, j).is_zero() {
                    let q = div_round(a.at(t, j), a.at(t, t));
                    if !q.is_zero() {
                        col_sub(&mut a, &mut v, j, t, &q);
                    }
                    if !a.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot clears its row and column; make sure it divides the rest
            let mut offender = None;
            'scan: for i in t + 1..a.rows {
                for j in t + 1..a.cols {
                    if !(a.at(i, j) % a.at(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    row_add(&mut a, &mut u, t, i, &one);
                }
                None => break,
            }
        }
    }

    for t in 0..steps {
        if a.at(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
    }
    (u, a, v)
}

fn min_abs_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.at(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            match &best {
                Some((b, _, _)) if *b <= ax => {}
                _ => best = Some((ax, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Quotient rounded toward the nearest integer, which keeps remainders small
/// and the elimination fast.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) != (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, r1: usize, r2: usize) {
    for j in 0..a.cols {
        let tmp = a.at(r1, j).clone();
        *a.at_mut(r1, j) = a.at(r2, j).clone();
        *a.at_mut(r2, j) = tmp;
    }
    for j in 0..u.cols {
        let tmp = u.at(r1, j).clone();
        *u.at_mut(r1, j) = u.at(r2, j).clone();
        *u.at_mut(r2, j) = tmp;
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, c1: usize, c2: usize) {
    for i in 0..a.rows {
        let tmp = a.at(i, c1).clone();
        *a.at_mut(i, c1) = a.at(i, c2).clone();
        *a.at_mut(i, c2) = tmp;
    }
    for i in 0..v.rows {
        let tmp = v.at(i, c1).clone();
        *v.at_mut(i, c1) = v.at(i, c2).clone();
        *v.at_mut(i, c2) = tmp;
    }
}

/// row_i -= q * row_t
fn row_sub(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..a.cols {
        let d = q * a.at(t, j);
        *a.at_mut(i, j) -= d;
    }
    for j in 0..u.cols {
        let d = q * u.at(t, j);
        *u.at_mut(i, j) -= d;
    }
}

/// row_t += q * row_i
fn row_add(a: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize, q: &BigInt) {
    for j in 0..a.cols {
        let d = q * a.at(i, j);
        *a.at_mut(t, j) += d;
    }
    for j in 0..u.cols {
        let d = q * u.at(i, j);
        *u.at_mut(t, j) += d;
    }
}

/// col_j -= q * col_t
fn col_sub(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..a.rows {
        let d = q * a.at(i, t);
        *a.at_mut(i, j) -= d;
    }
    for i in 0..v.rows {
        let d = q * v.at(i, t);
        *v.at_mut(i, j) -= d;
    }
}

fn negate_row(a: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..a.cols {
        let x = -a.at(t, j).clone();
        *a.at_mut(t, j) = x;
    }
    for j in 0..u.cols {
        let x = -u.at(t, j).clone();
        *u.at_mut(t, j) = x;
    }
}

/// Finitely generated abelian group in invariant-factor normal form:
/// Z^free_rank + Z/d1 + ... + Z/dk with every di >= 2 and d1 | d2 | ... | dk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero_group() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(d: u64) -> Self {
        if d == 0 {
            AbelianGroup::free(1)
        } else if d == 1 {
            AbelianGroup::zero_group()
        } else {
            AbelianGroup {
                free_rank: 0,
                torsion: vec![BigInt::from(d)],
            }
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning Z) into
    /// invariant-factor form.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut diag = IntMatrix::zero(n, n);
        for (i, d) in orders.iter().enumerate() {
            *diag.at_mut(i, i) = d.clone();
        }
        cokernel(&diag)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Total number of generators in the normal form.
    pub fn gens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of the i-th generator: 0 for free generators, d for torsion.
    pub fn order_of(&self, i: usize) -> BigInt {
        if i < self.free_rank {
            BigInt::zero()
        } else {
            self.torsion[i - self.free_rank].clone()
        }
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders: Vec<BigInt> = Vec::new();
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        let mut g = AbelianGroup::from_orders(&orders);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }

    pub fn validate(&self) -> Result<(), AbelianError> {
        let two = BigInt::from(2);
        for (i, d) in self.torsion.iter().enumerate() {
            if d < &two {
                return Err(AbelianError::BadTorsion(d.clone()));
            }
            if i + 1 < self.torsion.len() && !(&self.torsion[i + 1] % d).is_zero() {
                return Err(AbelianError::BadTorsion(self.torsion[i + 1].clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AbelianGroup {
    /// Canonical rendering: `Z^r + Z/d1 + Z/d2 ...`, `Z` for rank one, `0` for
    /// the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of M read as a presentation: rows index generators, columns are
/// relations.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let (_, d, _) = smith_normal_form(m);
    let mut torsion = Vec::new();
    let mut free = 0usize;
    let k = m.rows.min(m.cols);
    let one = BigInt::one();
    for i in 0..m.rows {
        if i >= k || d.at(i, i).is_zero() {
            free += 1;
        } else if d.at(i, i) != &one {
            torsion.push(d.at(i, i).clone());
        }
    }
    torsion.sort();
    AbelianGroup {
        free_rank: free,
        torsion,
    }
}

/// Morphism between groups in normal form, as a matrix on the chosen
/// generators (columns indexed by source generators, rows by target).
/// Torsion respect is validated eagerly: a generator of order d must land in
/// the d-torsion of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMorphism {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupMorphism {
    pub fn new(
        source: AbelianGroup,
        target: AbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows != target.gens() || matrix.cols != source.gens() {
            return Err(AbelianError::MorphismShape(
                matrix.rows,
                matrix.cols,
                target.gens(),
                source.gens(),
            ));
        }
        for j in 0..matrix.cols {
            let d = source.order_of(j);
            if d.is_zero() {
                continue;
            }
            for i in 0..matrix.rows {
                let e = target.order_of(i);
                let moved = &d * matrix.at(i, j);
                let ok = if e.is_zero() {
                    moved.is_zero()
                } else {
                    (&moved % &e).is_zero()
                };
                if !ok {
                    return Err(AbelianError::TorsionViolation { col: j, order: d });
                }
            }
        }
        Ok(GroupMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: AbelianGroup, target: AbelianGroup) -> Self {
        let matrix = IntMatrix::zero(target.gens(), source.gens());
        GroupMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: AbelianGroup) -> Self {
        let matrix = IntMatrix::identity(g.gens());
        GroupMorphism {
            source: g.clone(),
            target: g,
            matrix,
        }
    }

    pub fn is_zero(&self) -> bool {
        for j in 0..self.matrix.cols {
            for i in 0..self.matrix.rows {
                let e = self.target.order_of(i);
                let x = self.matrix.at(i, j);
                let zero = if e.is_zero() {
                    x.is_zero()
                } else {
                    (x % &e).is_zero()
                };
                if !zero {
                    return false;
                }
            }
        }
        true
    }

    pub fn compose_after(&self, first: &GroupMorphism) -> Result<GroupMorphism, AbelianError> {
        if first.target.gens() != self.source.gens() {
            return Err(AbelianError::ComposeMismatch(
                first.target.gens(),
                self.source.gens(),
            ));
        }
        GroupMorphism::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }
}

/// Coefficient group for tensor/Hom computations: Z or Z/m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Z,
    Cyclic(BigInt),
}

impl Coeff {
    pub fn z2() -> Self {
        Coeff::Cyclic(BigInt::from(2))
    }
}

/// The four derived pairings against a cyclic or free coefficient group,
/// computed factor-wise on the invariant decomposition.
pub struct DerivedGroups {
    pub tensor: AbelianGroup,
    pub tor: AbelianGroup,
    pub hom: AbelianGroup,
    pub ext: AbelianGroup,
}

pub fn tensor_tor_hom_ext(g: &AbelianGroup, a: &Coeff) -> DerivedGroups {
    match a {
        Coeff::Z => DerivedGroups {
            tensor: g.clone(),
            tor: AbelianGroup::zero_group(),
            hom: AbelianGroup::free(g.free_rank),
            ext: AbelianGroup {
                free_rank: 0,
                torsion: g.torsion.clone(),
            },
        },
        Coeff::Cyclic(m) => {
            let gcds: Vec<BigInt> = g.torsion.iter().map(|d| d.gcd(m)).collect();
            let free_part: Vec<BigInt> = vec![m.clone(); g.free_rank];
            let mut tensor_orders = free_part.clone();
            tensor_orders.extend(gcds.iter().cloned());
            DerivedGroups {
                tensor: AbelianGroup::from_orders(&tensor_orders),
                tor: AbelianGroup::from_orders(&gcds),
                hom: AbelianGroup::from_orders(&tensor_orders),
                ext: AbelianGroup::from_orders(&gcds),
            }
        }
    }
}

/// Graded homology known up to a declared degree; absent degrees in range are
/// zero, degrees beyond it are an error to query.
#[derive(Clone, Debug)]
pub struct GradedGroups {
    pub by_degree: BTreeMap<usize, AbelianGroup>,
    pub max_known: usize,
}

impl GradedGroups {
    pub fn new(max_known: usize) -> Self {
        GradedGroups {
            by_degree: BTreeMap::new(),
            max_known,
        }
    }

    pub fn set(&mut self, degree: usize, g: AbelianGroup) {
        if !g.is_trivial() {
            self.by_degree.insert(degree, g);
        }
    }

    pub fn get(&self, degree: usize) -> Result<AbelianGroup, AbelianError> {
        if degree > self.max_known {
            return Err(AbelianError::MissingDegree(degree));
        }
        Ok(self
            .by_degree
            .get(&degree)
            .cloned()
            .unwrap_or_else(AbelianGroup::zero_group))
    }
}

/// Which universal-coefficient formula to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UctVariant {
    /// H^n(-; A) = Hom(H_n, A) + Ext(H_{n-1}, A)
    Cohomology,
    /// H_n(-; Z/m) = H_n (x) Z/m + Tor(H_{n-1}, Z/m)
    HomologyMod,
}

pub fn uct_cohomology(
    h: &GradedGroups,
    n: usize,
    a: &Coeff,
    variant: UctVariant,
) -> Result<AbelianGroup, AbelianError> {
    let hn = h.get(n)?;
    let hprev = if n == 0 {
        AbelianGroup::zero_group()
    } else {
        h.get(n - 1)?
    };
    let dn = tensor_tor_hom_ext(&hn, a);
    let dprev = tensor_tor_hom_ext(&hprev, a);
    Ok(match variant {
        UctVariant::Cohomology => dn.hom.direct_sum(&dprev.ext),
        UctVariant::HomologyMod => dn.tensor.direct_sum(&dprev.tor),
    })
}

/// Solves T x = v over the integers. Returns None when no integral solution
/// exists.
pub fn solve(t: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(t.rows, v.len(), "solve shape");
    let (u, d, vv) = smith_normal_form(t);
    let w = u.mul_vec(v);
    let k = t.rows.min(t.cols);
    let mut y = vec![BigInt::zero(); t.cols];
    for i in 0..t.rows {
        if i < k && !d.at(i, i).is_zero() {
            let (q, r) = w[i].div_rem(d.at(i, i));
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !w[i].is_zero() {
            return None;
        }
    }
    Some(vv.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn snf_diag(m: &IntMatrix) -> Vec<BigInt> {
        let (u, d, v) = smith_normal_form(m);
        assert!(u.is_unimodular(), "U not unimodular for {:?}", m);
        assert!(v.is_unimodular(), "V not unimodular for {:?}", m);
        assert_eq!(u.mul(m).mul(&v), d, "U*M*V != D for {:?}", m);
        let k = m.rows.min(m.cols);
        (0..k).map(|i| d.at(i, i).clone()).collect()
    }

    /// gcd of all k x k minors; the product d1...dk must equal it.
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return vec![];
            }
            let mut out = Vec::new();
            for first in 0..=n - k {
                for mut rest in combos(n - first - 1, k - 1) {
                    for r in rest.iter_mut() {
                        *r += first + 1;
                    }
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(m.rows, k) {
            for cs in combos(m.cols, k) {
                let mut sub = IntMatrix::zero(k, k);
                for (a, &i) in rs.iter().enumerate() {
                    for (b, &j) in cs.iter().enumerate() {
                        *sub.at_mut(a, b) = m.at(i, j).clone();
                    }
                }
                g = g.gcd(&sub.det());
            }
        }
        g
    }

    fn check_against_minor_oracle(m: &IntMatrix) {
        let diag = snf_diag(m);
        for i in 0..diag.len().saturating_sub(1) {
            if !diag[i].is_zero() {
                assert!(
                    (&diag[i + 1] % &diag[i]).is_zero(),
                    "chain broken: {:?}",
                    diag
                );
            } else {
                assert!(diag[i + 1].is_zero(), "zero before nonzero: {:?}", diag);
            }
            assert!(!diag[i].is_negative());
        }
        let mut product = BigInt::one();
        for (k, d) in diag.iter().enumerate() {
            product *= d;
            assert_eq!(
                product,
                minor_gcd(m, k + 1),
                "minor gcd mismatch at k={} for {:?}",
                k + 1,
                m
            );
        }
    }

    #[test]
    fn snf_identity() {
        let i2 = IntMatrix::identity(2);
        let (u, d, v) = smith_normal_form(&i2);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(d, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_two_by_two() {
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let diag = snf_diag(&m);
        assert_eq!(diag, vec![BigInt::from(2), BigInt::from(4)]);
        check_against_minor_oracle(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let (_, d, _) = smith_normal_form(&m);
        assert!(d.is_zero());
    }

    #[test]
    fn snf_known_hard() {
        // invariant factors 1, 3, 21, 0 for this classic example
        let m = IntMatrix::from_i64(
            4,
            4,
            &[
                -6, 111, -36, 6, 5, -672, 210, 74, 0, -255, 81, 24, -7, 255, -81, -10,
            ],
        );
        check_against_minor_oracle(&m);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel(&IntMatrix::from_i64(1, 1, &[2])),
            AbelianGroup::cyclic(2)
        );
        let g = cokernel(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 0]));
        assert_eq!(
            g,
            AbelianGroup {
                free_rank: 1,
                torsion: vec![BigInt::from(2)]
            }
        );
        assert_eq!(
            cokernel(&IntMatrix::from_i64(1, 1, &[3])),
            AbelianGroup::cyclic(3)
        );
        // wide and tall zero-relation cases
        assert_eq!(cokernel(&IntMatrix::zero(3, 1)), AbelianGroup::free(3));
    }

    #[test]
    fn from_orders_normalizes() {
        let g = AbelianGroup::from_orders(&[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(g, AbelianGroup::cyclic(6));
        let g = AbelianGroup::from_orders(&[BigInt::from(4), BigInt::from(6)]);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(12)]);
        let twice = AbelianGroup::from_orders(&g.torsion);
        assert_eq!(twice, g);
    }

    #[test]
    fn display_rendering() {
        assert_eq!(AbelianGroup::zero_group().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        assert_eq!(AbelianGroup::free(2).to_string(), "Z^2");
        let g = AbelianGroup {
            free_rank: 1,
            torsion: vec![BigInt::from(2), BigInt::from(4)],
        };
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
        assert_eq!(AbelianGroup::cyclic(2).to_string(), "Z/2");
    }

    #[test]
    fn tensor_tor_hom_ext_cyclic() {
        let g = AbelianGroup {
            free_rank: 1,
            torsion: vec![BigInt::from(3)],
        };
        let d = tensor_tor_hom_ext(&g, &Coeff::z2());
        assert_eq!(d.tensor, AbelianGroup::cyclic(2));
        let z2 = AbelianGroup::cyclic(2);
        let d = tensor_tor_hom_ext(&z2, &Coeff::z2());
        assert_eq!(d.tor, AbelianGroup::cyclic(2));
        let z3 = AbelianGroup::cyclic(3);
        let d = tensor_tor_hom_ext(&z3, &Coeff::Z);
        assert_eq!(d.ext, AbelianGroup::cyclic(3));
        assert_eq!(d.hom, AbelianGroup::zero_group());
        let d = tensor_tor_hom_ext(&AbelianGroup::cyclic(2), &Coeff::Z);
        assert_eq!(d.ext, AbelianGroup::cyclic(2));
    }

    #[test]
    fn uct_basic() {
        // homology Z in degree 3, Z/2 in degree 5: H^6(-;Z) = Ext(Z/2) = Z/2
        let mut h = GradedGroups::new(9);
        h.set(3, AbelianGroup::free(1));
        h.set(5, AbelianGroup::cyclic(2));
        let h6 = uct_cohomology(&h, 6, &Coeff::Z, UctVariant::Cohomology).unwrap();
        assert_eq!(h6, AbelianGroup::cyclic(2));
        let h3 = uct_cohomology(&h, 3, &Coeff::Z, UctVariant::Cohomology).unwrap();
        assert_eq!(h3, AbelianGroup::free(1));
        // mod-2 homology in degree 6 picks up Tor from degree 5
        let h6m = uct_cohomology(&h, 6, &Coeff::z2(), UctVariant::HomologyMod).unwrap();
        assert_eq!(h6m, AbelianGroup::cyclic(2));
        let empty = uct_cohomology(&h, 1, &Coeff::Z, UctVariant::Cohomology).unwrap();
        assert!(empty.is_trivial());
        assert!(uct_cohomology(&h, 10, &Coeff::Z, UctVariant::Cohomology).is_err());
    }

    #[test]
    fn morphism_torsion_respect() {
        let z = AbelianGroup::free(1);
        let z2 = AbelianGroup::cyclic(2);
        // Z -> Z/2 reduction is fine
        assert!(GroupMorphism::new(z.clone(), z2.clone(), IntMatrix::from_i64(1, 1, &[1])).is_ok());
        // Z/2 -> Z nonzero is rejected
        assert!(
            GroupMorphism::new(z2.clone(), z.clone(), IntMatrix::from_i64(1, 1, &[1])).is_err()
        );
        // Z/2 -> Z/4 must land in the 2-torsion
        let z4 = AbelianGroup::cyclic(4);
        assert!(
            GroupMorphism::new(z2.clone(), z4.clone(), IntMatrix::from_i64(1, 1, &[1])).is_err()
        );
        assert!(GroupMorphism::new(z2.clone(), z4, IntMatrix::from_i64(1, 1, &[2])).is_ok());
        // zero morphism detection modulo target torsion
        let m = GroupMorphism::new(z2.clone(), z2, IntMatrix::from_i64(1, 1, &[2])).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn solve_integral() {
        let t = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let x = solve(&t, &[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(solve(&t, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let wide = IntMatrix::from_i64(1, 2, &[2, 3]);
        let x = solve(&wide, &[BigInt::from(1)]).unwrap();
        assert_eq!(wide.mul_vec(&x), vec![BigInt::from(1)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn snf_matches_minor_gcd_oracle(
            rows in 1usize..=4,
            cols in 1usize..=4,
            seed in proptest::collection::vec(-9i64..=9, 16),
        ) {
            let entries: Vec<i64> = seed.into_iter().take(rows * cols).collect();
            prop_assume!(entries.len() == rows * cols);
            let m = IntMatrix::from_i64(rows, cols, &entries);
            check_against_minor_oracle(&m);
        }
    }
}
