//! Picard groupoid classification algebra: quadratic and skew-symmetric
//! forms between finite abelian groups, the short exact sequence relating
//! alternating forms, skew forms and diagonal homomorphisms, the
//! functor-existence criterion on symmetry invariants, and the graded
//! two-element torsor model with its sign twist.

use crate::abelian::{AbelianGroup, GroupMorphism};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PicardError {
    #[error("group must be finite for this check")]
    InfiniteGroup,
    #[error("group order {0} exceeds the bound {1}")]
    SizeBound(u64, u64),
    #[error("form is not skew-symmetric")]
    NotSkew,
    #[error("table entry ({0},{1}) is not killed by the generator orders")]
    IllDefined(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("symmetry invariant is missing")]
    MissingQ,
    #[error("quadratic data is not linear quadratic")]
    NotLinearQuadratic,
    #[error("torsor action must be the fixed-point-free swap")]
    BadAction,
    #[error("grade must be 0 or 1")]
    BadGrade,
    #[error(transparent)]
    Registry(#[from] crate::registry::RegistryError),
}

/// Direct product of cyclic groups; an order of 0 marks an infinite cyclic
/// factor. Elements are coordinate words, finite coordinates normalized into
/// 0..order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicProduct {
    pub orders: Vec<u64>,
}

impl CyclicProduct {
    pub fn new(orders: &[u64]) -> Self {
        CyclicProduct {
            orders: orders.to_vec(),
        }
    }

    pub fn from_abelian(g: &AbelianGroup) -> Result<Self, PicardError> {
        let mut orders = vec![0u64; g.free_rank];
        for d in &g.torsion {
            orders.push(
                d.to_u64()
                    .ok_or_else(|| Shape::err("torsion order does not fit in u64"))?,
            );
        }
        Ok(CyclicProduct { orders })
    }

    /// The quotient by doubled elements, generator by generator: an infinite
    /// or even cyclic factor contributes order 2, an odd one collapses.
    pub fn mod_two(g: &AbelianGroup) -> Result<Self, PicardError> {
        let full = CyclicProduct::from_abelian(g)?;
        let orders = full
            .orders
            .iter()
            .map(|&d| if d == 0 { 2 } else { gcd(d, 2) })
            .collect();
        Ok(CyclicProduct { orders })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&d| d != 0)
    }

    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut n: u64 = 1;
        for &d in &self.orders {
            n = n.checked_mul(d)?;
        }
        Some(n)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.orders.len()]
    }

    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut w = self.zero();
        w[i] = 1;
        w
    }

    pub fn reduce(&self, w: &[i64]) -> Vec<i64> {
        w.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| if d == 0 { x } else { x.rem_euclid(d as i64) })
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        let n: Vec<i64> = x.iter().map(|a| -a).collect();
        self.reduce(&n)
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = x.iter().map(|a| k * a).collect();
        self.reduce(&s)
    }

    pub fn is_zero_word(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&a| a == 0)
    }

    /// All elements of a finite product.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            let mut next = Vec::new();
            for w in &out {
                for v in 0..d.max(1) as i64 {
                    let mut e = w.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// All words with finite coordinates exhausted and free coordinates
    /// ranging over -bound..=bound.
    pub fn words(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            let range: Vec<i64> = if d == 0 {
                (-bound..=bound).collect()
            } else {
                (0..d as i64).collect()
            };
            let mut next = Vec::new();
            for w in &out {
                for &v in &range {
                    let mut e = w.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Number of elements killed by m in a finite product.
    fn torsion_count(&self, m: u64) -> u64 {
        self.orders.iter().map(|&d| gcd(m, d.max(1))).product()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

struct Shape;
impl Shape {
    fn err(msg: &str) -> PicardError {
        PicardError::Shape(msg.to_string())
    }
}

/// Result of a verification that may have been cut short: `sampled` marks
/// checks over an infinite domain or a truncated enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub sampled: bool,
}

/// A map between cyclic products stored as a value table on all words within
/// the declared bound.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticMap {
    pub domain: CyclicProduct,
    pub codomain: CyclicProduct,
    pub bound: i64,
    pub values: BTreeMap<Vec<i64>, Vec<i64>>,
}

impl QuadraticMap {
    pub fn tabulate<F>(domain: CyclicProduct, codomain: CyclicProduct, bound: i64, f: F) -> Self
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let mut values = BTreeMap::new();
        for w in domain.words(bound) {
            let v = codomain.reduce(&f(&w));
            values.insert(w, v);
        }
        QuadraticMap {
            domain,
            codomain,
            bound,
            values,
        }
    }

    pub fn zero_map(domain: CyclicProduct, codomain: CyclicProduct) -> Self {
        let z = codomain.zero();
        QuadraticMap::tabulate(domain, codomain, 1, |_| z.clone())
    }

    pub fn value(&self, w: &[i64]) -> Option<Vec<i64>> {
        let r = self.domain.reduce(w);
        for (&x, &d) in r.iter().zip(&self.domain.orders) {
            if d == 0 && x.abs() > self.bound {
                return None;
            }
        }
        self.values.get(&r).cloned()
    }

    /// The associated symmetric pairing b(x, y) = q(x+y) - q(x) - q(y), when
    /// all three values are tabulated.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> Option<Vec<i64>> {
        let s = self.value(&self.domain.add(x, y))?;
        let qx = self.value(x)?;
        let qy = self.value(y)?;
        let minus = self
            .codomain
            .add(&self.codomain.neg(&qx), &self.codomain.neg(&qy));
        Some(self.codomain.add(&s, &minus))
    }

    /// The pairing is additive in each slot. Exhaustive over finite domains
    /// of at most 40 tabulated words; truncated and flagged otherwise.
    pub fn is_quadratic(&self) -> Verdict {
        let mut keys: Vec<Vec<i64>> = self.values.keys().cloned().collect();
        let mut sampled = !self.domain.is_finite();
        if keys.len() > 40 {
            keys.truncate(40);
            sampled = true;
        }
        let mut holds = true;
        for x in &keys {
            for y in &keys {
                for z in &keys {
                    let xz = self.domain.add(x, z);
                    let (Some(joint), Some(bx), Some(bz)) =
                        (self.pairing(&xz, y), self.pairing(x, y), self.pairing(z, y))
                    else {
                        sampled = true;
                        continue;
                    };
                    let sum = self.codomain.add(&bx, &bz);
                    if joint != sum {
                        holds = false;
                    }
                }
            }
        }
        Verdict { holds, sampled }
    }

    /// Quadratic, doubled values vanish, and the value only depends on the
    /// class modulo doubled elements.
    pub fn is_linear_quadratic(&self) -> Verdict {
        let q = self.is_quadratic();
        let mut holds = q.holds;
        let mut sampled = q.sampled;
        for (w, v) in &self.values {
            if !self.codomain.is_zero_word(&self.codomain.scale(2, v)) {
                holds = false;
            }
            for i in 0..self.domain.rank() {
                let shifted = self
                    .domain
                    .add(w, &self.domain.scale(2, &self.domain.unit(i)));
                match self.value(&shifted) {
                    Some(sv) => {
                        if sv != *v {
                            holds = false;
                        }
                    }
                    None => sampled = true,
                }
            }
        }
        Verdict { holds, sampled }
    }
}

/// Bilinear form on a finite product, stored by its generator matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewForm {
    pub pi0: CyclicProduct,
    pub pi1: CyclicProduct,
    pub table: Vec<Vec<Vec<i64>>>,
}

impl SkewForm {
    pub fn new(
        pi0: CyclicProduct,
        pi1: CyclicProduct,
        table: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self, PicardError> {
        if !pi0.is_finite() || !pi1.is_finite() {
            return Err(PicardError::InfiniteGroup);
        }
        let r = pi0.rank();
        if table.len() != r || table.iter().any(|row| row.len() != r) {
            return Err(Shape::err(
                "generator table must be square of the generator count",
            ));
        }
        let form = SkewForm { pi0, pi1, table };
        for i in 0..r {
            for j in 0..r {
                let killer = gcd(form.pi0.orders[i], form.pi0.orders[j]) as i64;
                let moved = form.pi1.scale(killer, &form.table[i][j]);
                if !form.pi1.is_zero_word(&moved) {
                    return Err(PicardError::IllDefined(i, j));
                }
            }
        }
        Ok(form)
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut acc = self.pi1.zero();
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                let term = self.pi1.scale(xi * yj, &self.table[i][j]);
                acc = self.pi1.add(&acc, &term);
            }
        }
        acc
    }

    pub fn is_skew(&self) -> bool {
        let elems = self.pi0.elements();
        for x in &elems {
            for y in &elems {
                let s = self.pi1.add(&self.eval(x, y), &self.eval(y, x));
                if !self.pi1.is_zero_word(&s) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_alternating(&self) -> bool {
        if !self.is_skew() {
            return false;
        }
        self.pi0
            .elements()
            .iter()
            .all(|x| self.pi1.is_zero_word(&self.eval(x, x)))
    }
}

/// Restriction of a skew form to the diagonal. The result is a linear
/// quadratic map: its pairing vanishes because the form is skew.
pub fn delta_star(sigma: &SkewForm) -> Result<QuadraticMap, PicardError> {
    if !sigma.is_skew() {
        return Err(PicardError::NotSkew);
    }
    let q = QuadraticMap::tabulate(sigma.pi0.clone(), sigma.pi1.clone(), 0, |x| {
        sigma.eval(x, x)
    });
    let verdict = q.is_linear_quadratic();
    assert!(verdict.holds && !verdict.sampled);
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesReport {
    pub alt: BigInt,
    pub skew: BigInt,
    pub hom: BigInt,
    pub exact: bool,
}

/// Sizes of the three groups in 0 -> Alt -> Skew -> Hom(pi0/2pi0, pi1) -> 0
/// and whether the sequence is exact. Counts come from the generator
/// parametrization; small instances are additionally enumerated pointwise
/// and must agree.
pub fn ses_check(pi0: &CyclicProduct, pi1: &CyclicProduct) -> Result<SesReport, PicardError> {
    const ORDER_BOUND: u64 = 1 << 12;
    let n0 = pi0.order().ok_or(PicardError::InfiniteGroup)?;
    let n1 = pi1.order().ok_or(PicardError::InfiniteGroup)?;
    if n0 > ORDER_BOUND {
        return Err(PicardError::SizeBound(n0, ORDER_BOUND));
    }
    if n1 > ORDER_BOUND {
        return Err(PicardError::SizeBound(n1, ORDER_BOUND));
    }
    let r = pi0.rank();
    let d = &pi0.orders;

    // a skew form is free on strictly-upper entries killed by gcd(d_i, d_j)
    // plus diagonal entries killed by gcd(2, d_i); alternating forms have
    // zero diagonal; a homomorphism out of pi0/2pi0 is a choice of diagonal
    let mut alt = BigInt::one();
    for i in 0..r {
        for j in i + 1..r {
            alt *= BigInt::from(pi1.torsion_count(gcd(d[i], d[j])));
        }
    }
    let mut hom = BigInt::one();
    for i in 0..r {
        hom *= BigInt::from(pi1.torsion_count(gcd(2, d[i])));
    }
    let skew = &alt * &hom;

    // the diagonal map is onto: each candidate diagonal extends to a skew
    // form with zero off-diagonal part
    let mut surjective = true;
    for i in 0..r {
        let killer = gcd(2, d[i]);
        for v in pi1.elements() {
            if !pi1.is_zero_word(&pi1.scale(killer as i64, &v)) {
                continue;
            }
            let mut table = vec![vec![pi1.zero(); r]; r];
            table[i][i] = v;
            let form = SkewForm::new(pi0.clone(), pi1.clone(), table)?;
            if !form.is_skew() {
                surjective = false;
            }
        }
    }

    // pointwise enumeration of every bilinear form when it is small enough
    let mut pair_values: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut count: u64 = 1;
    let mut feasible = true;
    for i in 0..r {
        for j in 0..r {
            let killer = gcd(d[i], d[j]) as i64;
            let valid: Vec<Vec<i64>> = pi1
                .elements()
                .into_iter()
                .filter(|v| pi1.is_zero_word(&pi1.scale(killer, v)))
                .collect();
            count = match count.checked_mul(valid.len() as u64) {
                Some(c) => c,
                None => {
                    feasible = false;
                    0
                }
            };
            pair_values.push(valid);
        }
    }
    let mut kernel_is_alt = true;
    if feasible && count <= 4096 && count.saturating_mul(n0 * n0) <= 1 << 20 {
        let mut skew_seen = BigInt::zero();
        let mut alt_seen = BigInt::zero();
        let mut odometer = vec![0usize; pair_values.len()];
        loop {
            let mut table = vec![vec![pi1.zero(); r]; r];
            for (k, &pick) in odometer.iter().enumerate() {
                table[k / r][k % r] = pair_values[k][pick].clone();
            }
            let form = SkewForm {
                pi0: pi0.clone(),
                pi1: pi1.clone(),
                table,
            };
            if form.is_skew() {
                skew_seen += 1;
                let zero_diagonal = (0..r).all(|i| {
                    form.pi1
                        .is_zero_word(&form.eval(&form.pi0.unit(i), &form.pi0.unit(i)))
                });
                let alternating = form.is_alternating();
                if alternating {
                    alt_seen += 1;
                }
                if zero_diagonal != alternating {
                    kernel_is_alt = false;
                }
            }
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    break;
                }
                odometer[k] += 1;
                if odometer[k] < pair_values[k].len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
            if k == odometer.len() {
                break;
            }
        }
        assert_eq!(skew_seen, skew);
        assert_eq!(alt_seen, alt);
    }

    let exact = skew == &alt * &hom && surjective && kernel_is_alt;
    Ok(SesReport {
        alt,
        skew,
        hom,
        exact,
    })
}

/// A Picard groupoid skeleton: its two homotopy groups and, when known, the
/// symmetry invariant as a linear quadratic map on pi0 modulo doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct PicardData {
    pub pi0: AbelianGroup,
    pub pi1: AbelianGroup,
    pub q: Option<QuadraticMap>,
}

impl PicardData {
    pub fn new(
        pi0: AbelianGroup,
        pi1: AbelianGroup,
        q: Option<QuadraticMap>,
    ) -> Result<Self, PicardError> {
        if let Some(q) = &q {
            let expected = CyclicProduct::mod_two(&pi0)?;
            if q.domain != expected {
                return Err(Shape::err(
                    "q must be defined on pi0 modulo doubled elements",
                ));
            }
            if q.codomain != CyclicProduct::from_abelian(&pi1)? {
                return Err(Shape::err("q must take values in pi1"));
            }
            if !q.is_linear_quadratic().holds {
                return Err(PicardError::NotLinearQuadratic);
            }
        }
        Ok(PicardData { pi0, pi1, q })
    }

    /// The groupoid of graded two-element torsors: both homotopy groups of
    /// order two and the identity invariant from the sign twist.
    pub fn super_torsors() -> Self {
        let q =
            QuadraticMap::tabulate(CyclicProduct::new(&[2]), CyclicProduct::new(&[2]), 0, |w| {
                vec![w[0]]
            });
        PicardData {
            pi0: AbelianGroup::cyclic(2),
            pi1: AbelianGroup::cyclic(2),
            q: Some(q),
        }
    }

    /// Ungraded two-element torsors: same homotopy groups, trivial invariant.
    pub fn plain_torsors() -> Self {
        let q = QuadraticMap::zero_map(CyclicProduct::new(&[2]), CyclicProduct::new(&[2]));
        PicardData {
            pi0: AbelianGroup::cyclic(2),
            pi1: AbelianGroup::cyclic(2),
            q: Some(q),
        }
    }
}

/// The Picard groupoid skeleton of the bordism category in dimension n for
/// the given tangential structure: pi0 is the bordism group in degree n, pi1
/// the one in degree n+1, and the symmetry invariant is left unknown.
pub fn picard_from_bordism(
    structure: crate::registry::Structure,
    n: usize,
) -> Result<PicardData, PicardError> {
    let pi0 = crate::registry::lookup_point_bordism(structure, n)?.group;
    let pi1 = crate::registry::lookup_point_bordism(structure, n + 1)?.group;
    PicardData::new(pi0, pi1, None)
}

/// Whether a symmetric monoidal functor with the given effect on homotopy
/// groups exists: the invariants must intertwine, checked on the generators
/// of the source.
pub fn functor_exists(
    src: &PicardData,
    dst: &PicardData,
    f0: &GroupMorphism,
    f1: &GroupMorphism,
) -> Result<bool, PicardError> {
    let (Some(q_src), Some(q_dst)) = (&src.q, &dst.q) else {
        return Err(PicardError::MissingQ);
    };
    if f0.source != src.pi0 || f0.target != dst.pi0 {
        return Err(Shape::err("f0 must map source pi0 to target pi0"));
    }
    if f1.source != src.pi1 || f1.target != dst.pi1 {
        return Err(Shape::err("f1 must map source pi1 to target pi1"));
    }
    let src_pi1 = CyclicProduct::from_abelian(&src.pi1)?;
    let dst_pi1 = CyclicProduct::from_abelian(&dst.pi1)?;
    for j in 0..src.pi0.gens() {
        let qv = q_src
            .value(&q_src.domain.unit(j))
            .ok_or_else(|| Shape::err("source invariant table is incomplete"))?;
        let rhs = apply_matrix(f1, &qv, &src_pi1, &dst_pi1)?;
        let image = matrix_column(f0, j)?;
        let lhs = q_dst
            .value(&q_dst.domain.reduce(&image))
            .ok_or_else(|| Shape::err("target invariant table is incomplete"))?;
        if dst_pi1.reduce(&lhs) != dst_pi1.reduce(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn matrix_column(f: &GroupMorphism, j: usize) -> Result<Vec<i64>, PicardError> {
    (0..f.matrix.rows)
        .map(|i| {
            f.matrix
                .at(i, j)
                .to_i64()
                .ok_or_else(|| Shape::err("matrix entry does not fit in i64"))
        })
        .collect()
}

fn apply_matrix(
    f: &GroupMorphism,
    word: &[i64],
    source: &CyclicProduct,
    target: &CyclicProduct,
) -> Result<Vec<i64>, PicardError> {
    if word.len() != source.rank() || f.matrix.cols != source.rank() {
        return Err(Shape::err("word length must match the morphism source"));
    }
    let mut out = target.zero();
    for (j, &wj) in word.iter().enumerate() {
        let col = matrix_column(f, j)?;
        out = target.add(&out, &target.scale(wj, &col));
    }
    Ok(out)
}

/// Two-element set with the free transitive flip action and a grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTorsor {
    pub elements: [String; 2],
    pub action: [usize; 2],
    pub grade: u8,
}

impl GradedTorsor {
    pub fn new(elements: [String; 2], action: [usize; 2], grade: u8) -> Result<Self, PicardError> {
        if action != [1, 0] {
            return Err(PicardError::BadAction);
        }
        if grade > 1 {
            return Err(PicardError::BadGrade);
        }
        Ok(GradedTorsor {
            elements,
            action,
            grade,
        })
    }

    pub fn standard(name: &str, grade: u8) -> Self {
        GradedTorsor {
            elements: [format!("{}+", name), format!("{}-", name)],
            action: [1, 0],
            grade,
        }
    }
}

/// Tensor over the anti-diagonal action. The two classes are named by their
/// representatives with first coordinate elements[0]; grades add.
pub fn torsor_tensor(t: &GradedTorsor, u: &GradedTorsor) -> GradedTorsor {
    GradedTorsor {
        elements: [
            format!("{}*{}", t.elements[0], u.elements[0]),
            format!("{}*{}", t.elements[0], u.elements[1]),
        ],
        action: [1, 0],
        grade: (t.grade + u.grade) % 2,
    }
}

/// Class permutation of the braiding t (x) u -> u (x) t. In the
/// representative bookkeeping of `torsor_tensor` the plain swap is the
/// identity on class indices; the twist flips both classes exactly when both
/// grades are odd.
pub fn torsor_symmetry(t: &GradedTorsor, u: &GradedTorsor) -> [usize; 2] {
    if t.grade * u.grade == 1 {
        [1, 0]
    } else {
        [0, 1]
    }
}

fn compose(second: [usize; 2], first: [usize; 2]) -> [usize; 2] {
    [second[first[0]], second[first[1]]]
}

/// The braiding composed with itself is the identity for every grade pair.
pub fn symmetry_is_involution() -> bool {
    for gt in 0..2u8 {
        for gu in 0..2u8 {
            let t = GradedTorsor::standard("t", gt);
            let u = GradedTorsor::standard("u", gu);
            let back_forth = compose(torsor_symmetry(&u, &t), torsor_symmetry(&t, &u));
            if back_forth != [0, 1] {
                return false;
            }
        }
    }
    true
}

/// Hexagon coherence: braiding past a tensor equals braiding past each
/// factor in turn, checked over all eight grade triples.
pub fn hexagon_holds() -> bool {
    for gx in 0..2u8 {
        for gy in 0..2u8 {
            for gz in 0..2u8 {
                let x = GradedTorsor::standard("x", gx);
                let y = GradedTorsor::standard("y", gy);
                let z = GradedTorsor::standard("z", gz);
                let joint = torsor_symmetry(&x, &torsor_tensor(&y, &z));
                let stepwise = compose(torsor_symmetry(&x, &z), torsor_symmetry(&x, &y));
                if joint != stepwise {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntMatrix;

    fn z(n: u64) -> CyclicProduct {
        CyclicProduct::new(&[n])
    }

    #[test]
    fn bordism_picard_data_reads_off_the_point_tables() {
        let p = picard_from_bordism(crate::registry::Structure::Spin, 4).unwrap();
        assert_eq!(p.pi0, AbelianGroup::free(1));
        assert!(p.pi1.is_trivial());
        assert!(p.q.is_none());
        let p = picard_from_bordism(crate::registry::Structure::Spin, 1).unwrap();
        assert_eq!(p.pi0, AbelianGroup::cyclic(2));
        assert_eq!(p.pi1, AbelianGroup::cyclic(2));
        assert!(picard_from_bordism(crate::registry::Structure::Spin, 9).is_err());
    }

    #[test]
    fn squaring_on_z4_is_quadratic_but_not_linear() {
        let q = QuadraticMap::tabulate(z(4), z(4), 0, |w| vec![w[0] * w[0]]);
        assert_eq!(
            q.is_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
        let lin = q.is_linear_quadratic();
        assert!(!lin.holds);
        assert!(!lin.sampled);
    }

    #[test]
    fn zero_and_identity_maps_are_linear_quadratic() {
        let zero = QuadraticMap::zero_map(z(4), z(2));
        assert_eq!(
            zero.is_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
        assert_eq!(
            zero.is_linear_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
        let ident = QuadraticMap::tabulate(z(2), z(2), 0, |w| vec![w[0]]);
        assert_eq!(
            ident.is_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
        assert_eq!(
            ident.is_linear_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
    }

    #[test]
    fn cubing_on_z9_is_not_quadratic() {
        let q = QuadraticMap::tabulate(z(9), z(9), 0, |w| vec![w[0] * w[0] * w[0]]);
        let v = q.is_quadratic();
        assert!(!v.holds);
        assert!(!v.sampled);
    }

    #[test]
    fn free_domain_checks_are_sampled() {
        let q = QuadraticMap::tabulate(CyclicProduct::new(&[0]), z(2), 3, |w| vec![w[0] * w[0]]);
        let v = q.is_quadratic();
        assert!(v.holds);
        assert!(v.sampled);
    }

    #[test]
    fn diagonal_of_alternating_form_is_zero() {
        let pi0 = CyclicProduct::new(&[2, 2]);
        let zero = vec![0];
        let one = vec![1];
        let table = vec![
            vec![zero.clone(), one.clone()],
            vec![one.clone(), zero.clone()],
        ];
        let sigma = SkewForm::new(pi0, z(2), table).unwrap();
        assert!(sigma.is_alternating());
        let q = delta_star(&sigma).unwrap();
        assert!(q.values.values().all(|v| v == &vec![0]));
    }

    #[test]
    fn diagonal_of_multiplication_form_is_identity() {
        let sigma = SkewForm::new(z(2), z(2), vec![vec![vec![1]]]).unwrap();
        assert!(sigma.is_skew());
        assert!(!sigma.is_alternating());
        let q = delta_star(&sigma).unwrap();
        assert_eq!(q.value(&[0]).unwrap(), vec![0]);
        assert_eq!(q.value(&[1]).unwrap(), vec![1]);
        assert_eq!(
            q.is_linear_quadratic(),
            Verdict {
                holds: true,
                sampled: false
            }
        );
    }

    #[test]
    fn skew_forms_are_validated() {
        let bad = SkewForm::new(z(2), z(4), vec![vec![vec![1]]]);
        assert_eq!(bad.unwrap_err(), PicardError::IllDefined(0, 0));
        let not_skew = SkewForm::new(z(3), z(3), vec![vec![vec![1]]]).unwrap();
        assert!(!not_skew.is_skew());
        assert_eq!(delta_star(&not_skew).unwrap_err(), PicardError::NotSkew);
    }

    #[test]
    fn ses_counts_on_small_groups() {
        let r = ses_check(&z(2), &z(2)).unwrap();
        assert_eq!(
            r,
            SesReport {
                alt: BigInt::from(1),
                skew: BigInt::from(2),
                hom: BigInt::from(2),
                exact: true
            }
        );
        let r = ses_check(&z(3), &z(2)).unwrap();
        assert_eq!(r.hom, BigInt::from(1));
        assert_eq!(r.skew, BigInt::from(1));
        assert!(r.exact);
        let r = ses_check(&CyclicProduct::new(&[]), &z(4)).unwrap();
        assert_eq!(
            r,
            SesReport {
                alt: BigInt::from(1),
                skew: BigInt::from(1),
                hom: BigInt::from(1),
                exact: true
            }
        );
        let r = ses_check(&CyclicProduct::new(&[2, 2]), &z(2)).unwrap();
        assert_eq!(r.alt, BigInt::from(2));
        assert_eq!(r.skew, BigInt::from(8));
        assert_eq!(r.hom, BigInt::from(4));
        assert!(r.exact);
        let r = ses_check(&z(4), &z(4)).unwrap();
        assert_eq!(r.alt, BigInt::from(1));
        assert_eq!(r.skew, BigInt::from(2));
        assert_eq!(r.hom, BigInt::from(2));
        assert!(r.exact);
    }

    #[test]
    fn ses_rejects_oversized_groups() {
        let big = CyclicProduct::new(&[1 << 13]);
        assert_eq!(
            ses_check(&big, &z(2)).unwrap_err(),
            PicardError::SizeBound(1 << 13, 1 << 12)
        );
        assert!(ses_check(&z(2), &CyclicProduct::new(&[0])).is_err());
    }

    #[test]
    fn functor_criterion_on_torsor_groupoids() {
        let sup = PicardData::super_torsors();
        let plain = PicardData::plain_torsors();
        let id0 = GroupMorphism::identity(AbelianGroup::cyclic(2));
        let id1 = GroupMorphism::identity(AbelianGroup::cyclic(2));
        assert_eq!(functor_exists(&sup, &sup, &id0, &id1), Ok(true));

        let zero1 = GroupMorphism::zero(AbelianGroup::cyclic(2), AbelianGroup::cyclic(2));
        assert_eq!(functor_exists(&sup, &sup, &id0, &zero1), Ok(false));

        // forgetting the grade keeps the monoidal data but not the symmetry
        assert_eq!(functor_exists(&sup, &plain, &id0, &id1), Ok(false));

        let no_q = PicardData::new(AbelianGroup::cyclic(2), AbelianGroup::cyclic(2), None).unwrap();
        assert_eq!(
            functor_exists(&no_q, &sup, &id0, &id1),
            Err(PicardError::MissingQ)
        );
    }

    #[test]
    fn picard_data_validates_its_invariant() {
        let not_linear = QuadraticMap::tabulate(z(4), z(4), 0, |w| vec![w[0] * w[0]]);
        let err = PicardData::new(
            AbelianGroup::cyclic(4),
            AbelianGroup::cyclic(4),
            Some(not_linear),
        );
        assert!(err.is_err());
        let sup = PicardData::super_torsors();
        let rebuilt = PicardData::new(sup.pi0.clone(), sup.pi1.clone(), sup.q.clone()).unwrap();
        assert_eq!(rebuilt, sup);
    }

    #[test]
    fn torsor_grades_add_and_symmetry_signs() {
        let t = GradedTorsor::standard("t", 1);
        let u = GradedTorsor::standard("u", 1);
        assert_eq!(torsor_tensor(&t, &u).grade, 0);
        assert_eq!(torsor_symmetry(&t, &u), [1, 0]);
        let even = GradedTorsor::standard("e", 0);
        assert_eq!(torsor_symmetry(&even, &u), [0, 1]);
        assert_eq!(torsor_tensor(&even, &u).grade, 1);
        assert_eq!(
            GradedTorsor::new(["a".into(), "b".into()], [0, 1], 0).unwrap_err(),
            PicardError::BadAction
        );
        assert_eq!(
            GradedTorsor::new(["a".into(), "b".into()], [1, 0], 2).unwrap_err(),
            PicardError::BadGrade
        );
    }

    #[test]
    fn torsor_coherence() {
        assert!(symmetry_is_involution());
        assert!(hexagon_holds());
    }

    #[test]
    fn morphism_application_respects_orders() {
        let f = GroupMorphism::new(
            AbelianGroup::cyclic(2),
            AbelianGroup::cyclic(4),
            IntMatrix::from_i64(1, 1, &[2]),
        )
        .unwrap();
        let src = CyclicProduct::new(&[2]);
        let dst = CyclicProduct::new(&[4]);
        assert_eq!(apply_matrix(&f, &[1], &src, &dst).unwrap(), vec![2]);
        assert_eq!(apply_matrix(&f, &[0], &src, &dst).unwrap(), vec![0]);
    }
}
