//! Characteristic numbers on formal products of spheres and K3 surfaces:
//! Chern data of special unitary bundles, the invariants (a, b, c) of a
//! bundle on a 7-manifold times a circle, the index quantity Xi, and the
//! divisibility constants it forces on Floer-type gradings.

use crate::ring::{
    CoefficientRing, CohomologyClass, Generator, GeneratorKind, RingError, RingPresentation,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CharError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("expected a class of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("value {0} is not an integer")]
    NotIntegral(BigRational),
    #[error("class lives on {0}, model is {1}")]
    ModelMismatch(String, String),
    #[error("a special unitary bundle must have vanishing first Chern class")]
    NonzeroC1,
    #[error("rank {0} bundle lists {1} Chern classes")]
    ChernCount(usize, usize),
    #[error("Chern class c{0} must have degree {1}")]
    ChernDegree(usize, usize),
    #[error("sphere blocks need dimension at least 1")]
    EmptySphere,
    #[error("generator index {0} is outside 2..=5")]
    GeneratorRange(usize),
    #[error("base must be the single sphere S{0}")]
    NotSphereBase(usize),
    #[error("no formula line for a model of dimension {0}")]
    NoFormulaLine(usize),
    #[error("invariants need an 8-dimensional model ending in a circle block")]
    NotLoopModel,
    #[error("invariants need a special unitary bundle")]
    NotSpecialUnitary,
    #[error("rank must be at least {0}")]
    RankTooSmall(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Block {
    Sphere(usize),
    K3,
}

impl Block {
    fn dimension(&self) -> usize {
        match self {
            Block::Sphere(n) => *n,
            Block::K3 => 4,
        }
    }

    fn base_label(&self) -> String {
        match self {
            Block::Sphere(n) => format!("s{}", n),
            Block::K3 => "k3".to_string(),
        }
    }

    fn display(&self) -> String {
        match self {
            Block::Sphere(n) => format!("S{}", n),
            Block::K3 => "K3".to_string(),
        }
    }
}

/// Product of sphere and K3 blocks with its torsion-free cohomology ring.
/// Each block contributes one exterior generator dual to its fundamental
/// class; the product of all of them is dual to the fundamental class of the
/// model, and integration reads off its coefficient.
pub struct ManifoldModel {
    pub name: String,
    pub blocks: Vec<Block>,
    pub ring: RingPresentation,
    pub dim: usize,
    top_word: Vec<usize>,
    top_sign: BigInt,
}

impl ManifoldModel {
    pub fn product(blocks: &[Block]) -> Result<Self, CharError> {
        let mut generators = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut dim = 0;
        for b in blocks {
            if b.dimension() == 0 {
                return Err(CharError::EmptySphere);
            }
            let mut label = b.base_label();
            while labels.iter().any(|l| *l == label) {
                label.push('\'');
            }
            labels.push(label.clone());
            generators.push(Generator {
                label,
                degree: b.dimension(),
                kind: GeneratorKind::Exterior,
            });
            dim += b.dimension();
        }
        let name: Vec<String> = blocks.iter().map(|b| b.display()).collect();
        let name = name.join("x");
        let ring = RingPresentation::new(&name, CoefficientRing::Z, generators, dim)?;
        // product orientation: the fundamental dual is the block duals
        // multiplied in block order, which differs from the label-sorted
        // stored monomial by a Koszul sign
        let mut fundamental = CohomologyClass::zero(&name, 0);
        fundamental.terms.insert(Vec::new(), BigInt::one());
        for i in 0..blocks.len() {
            let mut dual = CohomologyClass::zero(&name, generators_degree(&ring, i));
            dual.terms.insert(vec![i], BigInt::one());
            fundamental = ring.multiply(&fundamental, &dual)?;
        }
        let (top_word, top_sign) = fundamental
            .terms
            .iter()
            .next()
            .map(|(k, v)| (k.clone(), v.clone()))
            .unwrap_or_else(|| (Vec::new(), BigInt::one()));
        Ok(ManifoldModel {
            name,
            blocks: blocks.to_vec(),
            ring,
            dim,
            top_word,
            top_sign,
        })
    }

    pub fn unit(&self) -> CohomologyClass {
        let mut c = CohomologyClass::zero(&self.name, 0);
        c.terms.insert(Vec::new(), BigInt::one());
        c
    }

    /// Cohomology class dual to the fundamental class of the whole model.
    pub fn fundamental_dual(&self) -> CohomologyClass {
        let mut c = CohomologyClass::zero(&self.name, self.dim);
        c.terms.insert(self.top_word.clone(), self.top_sign.clone());
        c
    }

    /// Generator dual to the fundamental class of one block.
    pub fn block_dual(&self, i: usize) -> CohomologyClass {
        let mut c = CohomologyClass::zero(&self.name, self.blocks[i].dimension());
        c.terms.insert(vec![i], BigInt::one());
        c
    }

    /// First Pontryagin class: zero on every sphere block, 48 times the dual
    /// of the point class on each K3 block.
    pub fn p1(&self) -> CohomologyClass {
        let mut c = CohomologyClass::zero(&self.name, 4);
        for (i, b) in self.blocks.iter().enumerate() {
            if *b == Block::K3 {
                c.terms.insert(vec![i], BigInt::from(48));
            }
        }
        c
    }

    /// Pairing of a top-degree class with the fundamental class.
    pub fn integrate(&self, x: &CohomologyClass) -> Result<BigInt, CharError> {
        if x.ring != self.name {
            return Err(CharError::ModelMismatch(x.ring.clone(), self.name.clone()));
        }
        if x.degree != self.dim {
            return Err(CharError::DegreeMismatch {
                expected: self.dim,
                got: x.degree,
            });
        }
        let coeff = x
            .terms
            .get(&self.top_word)
            .cloned()
            .unwrap_or_else(BigInt::zero);
        Ok(coeff * &self.top_sign)
    }
}

fn generators_degree(ring: &RingPresentation, i: usize) -> usize {
    ring.generators[i].degree
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureGroup {
    SpecialUnitary,
    Unitary,
}

/// Chern data of a unitary bundle over a model: classes c_1, .., c_rank in
/// order, all higher classes implicitly zero.
#[derive(Clone, Debug)]
pub struct BundleData {
    pub group: StructureGroup,
    pub rank: usize,
    pub chern: Vec<CohomologyClass>,
}

impl BundleData {
    pub fn new(
        group: StructureGroup,
        rank: usize,
        chern: Vec<CohomologyClass>,
    ) -> Result<Self, CharError> {
        if chern.len() != rank {
            return Err(CharError::ChernCount(rank, chern.len()));
        }
        for (k, c) in chern.iter().enumerate() {
            if c.degree != 2 * (k + 1) {
                return Err(CharError::ChernDegree(k + 1, 2 * (k + 1)));
            }
        }
        if group == StructureGroup::SpecialUnitary && rank >= 1 && !chern[0].is_zero() {
            return Err(CharError::NonzeroC1);
        }
        Ok(BundleData { group, rank, chern })
    }

    pub fn trivial(rank: usize, model: &ManifoldModel) -> Self {
        let chern = (1..=rank)
            .map(|i| CohomologyClass::zero(&model.name, 2 * i))
            .collect();
        BundleData {
            group: StructureGroup::SpecialUnitary,
            rank,
            chern,
        }
    }

    pub fn chern(&self, i: usize, model: &ManifoldModel) -> CohomologyClass {
        if i >= 1 && i <= self.rank {
            self.chern[i - 1].clone()
        } else {
            CohomologyClass::zero(&model.name, 2 * i)
        }
    }
}

/// Direct sum with the total Chern class multiplied out. Classes above the
/// model dimension vanish on a closed manifold, so truncating at the ring cap
/// is exact.
pub fn whitney_sum(model: &ManifoldModel, bundles: &[BundleData]) -> Result<BundleData, CharError> {
    let rank: usize = bundles.iter().map(|b| b.rank).sum();
    let cap = model.ring.degree_cap;
    let top = rank.min(cap / 2);
    let unit = model.unit();
    let mut total = vec![unit.clone()];
    for b in bundles {
        for c in &b.chern {
            if !c.is_zero() && c.ring != model.name {
                return Err(CharError::ModelMismatch(c.ring.clone(), model.name.clone()));
            }
        }
        let mut next: Vec<CohomologyClass> = (0..=top)
            .map(|i| CohomologyClass::zero(&model.name, 2 * i))
            .collect();
        for i in 0..total.len() {
            for j in 0..=b.rank {
                let t = i + j;
                if t > top {
                    continue;
                }
                let cj = if j == 0 {
                    unit.clone()
                } else {
                    b.chern(j, model)
                };
                let prod = model.ring.multiply(&total[i], &cj)?;
                next[t] = model.ring.add(&next[t], &prod)?;
            }
        }
        total = next;
    }
    let group = if bundles
        .iter()
        .all(|b| b.group == StructureGroup::SpecialUnitary)
    {
        StructureGroup::SpecialUnitary
    } else {
        StructureGroup::Unitary
    };
    let chern = (1..=rank)
        .map(|i| {
            if i < total.len() {
                total[i].clone()
            } else {
                CohomologyClass::zero(&model.name, 2 * i)
            }
        })
        .collect();
    BundleData::new(group, rank, chern)
}

/// The clutching bundle generating the homotopy of the special unitary group
/// in dimension 2i - 1: its only Chern class is c_i, integrating to (i-1)!
/// over the 2i-sphere.
pub fn generator_bundle(i: usize, base: &ManifoldModel) -> Result<BundleData, CharError> {
    if !(2..=5).contains(&i) {
        return Err(CharError::GeneratorRange(i));
    }
    if base.blocks != vec![Block::Sphere(2 * i)] {
        return Err(CharError::NotSphereBase(2 * i));
    }
    let mut factorial = BigInt::one();
    for k in 2..i {
        factorial *= BigInt::from(k);
    }
    let mut chern: Vec<CohomologyClass> = (1..=i)
        .map(|j| CohomologyClass::zero(&base.name, 2 * j))
        .collect();
    let mut ci = base.block_dual(0);
    for (_, v) in ci.terms.iter_mut() {
        *v *= &factorial;
    }
    chern[i - 1] = ci;
    BundleData::new(StructureGroup::SpecialUnitary, i, chern)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuLoopInvariants {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

fn require_integer(x: BigRational) -> Result<BigInt, CharError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(CharError::NotIntegral(x))
    }
}

fn ratio(num: BigInt, den: i64) -> BigRational {
    BigRational::new(num, BigInt::from(den))
}

/// The triple (a, b, c) of a special unitary bundle over a 7-manifold times
/// a circle: a = (1/6) int c4 - (1/12) int c2^2, b = (1/48) int p1 c2,
/// c = (1/2) int c2^2. Each is an exact integer; a remainder means the input
/// data is not realizable and is reported as an error.
pub fn su_loop_invariants(
    model: &ManifoldModel,
    bundle: &BundleData,
) -> Result<SuLoopInvariants, CharError> {
    if model.dim != 8 || model.blocks.last() != Some(&Block::Sphere(1)) {
        return Err(CharError::NotLoopModel);
    }
    if bundle.group != StructureGroup::SpecialUnitary {
        return Err(CharError::NotSpecialUnitary);
    }
    let c2 = bundle.chern(2, model);
    let c4 = bundle.chern(4, model);
    let i2 = model.integrate(&model.ring.multiply(&c2, &c2)?)?;
    let i4 = model.integrate(&c4)?;
    let ip = model.integrate(&model.ring.multiply(&model.p1(), &c2)?)?;
    let a = require_integer(ratio(i4, 6) - ratio(i2.clone(), 12))?;
    let b = require_integer(ratio(ip, 48))?;
    let c = require_integer(ratio(i2, 2))?;
    Ok(SuLoopInvariants { a, b, c })
}

/// Index quantity Xi = ((r+6)/6) I2 - (r/3) I4 + (r/12) Ip in exact rational
/// arithmetic, where I2 = int c2^2, I4 = int c4, Ip = int p1 c2.
pub fn xi_index(r: usize, i2: &BigInt, i4: &BigInt, ip: &BigInt) -> Result<BigInt, CharError> {
    if r < 2 {
        return Err(CharError::RankTooSmall(2));
    }
    let r = BigInt::from(r);
    let value = ratio((&r + BigInt::from(6)) * i2, 6) - ratio(&r * i4, 3) + ratio(&r * ip, 12);
    require_integer(value)
}

/// The same quantity written in the invariants: Xi = -2ra + 4rb + 2c.
pub fn xi_from_abc(r: usize, inv: &SuLoopInvariants) -> BigInt {
    let r = BigInt::from(r);
    BigInt::from(-2) * &r * &inv.a + BigInt::from(4) * &r * &inv.b + BigInt::from(2) * &inv.c
}

/// Largest modulus m such that every attainable Xi at rank r is divisible by
/// m. Below rank 4 the constraint c = -6a collapses Xi to -(2r+12)a + 4rb;
/// from rank 4 on, a, b, c are independent.
pub fn floer_divisibility(r: usize) -> u64 {
    assert!(r >= 2);
    let r = r as u64;
    if r < 4 {
        (2 * r + 12).gcd(&(4 * r))
    } else {
        (2 * r).gcd(&(4 * r)).gcd(&2)
    }
}

/// Divisibility after stabilizing a rank < 4 bundle by trivial summands to
/// rank r_prime: c4 stays zero, so the constrained form of Xi persists.
pub fn stabilized_divisibility(r_prime: usize) -> u64 {
    assert!(r_prime >= 4);
    let r = r_prime as u64;
    (2 * r + 12).gcd(&(4 * r))
}

/// Pullbacks of the degree 3, 5, 7 generators of the cohomology of the
/// special unitary group. Absent classes are treated as zero.
#[derive(Clone, Default)]
pub struct SuClasses {
    pub b2: Option<CohomologyClass>,
    pub b3: Option<CohomologyClass>,
    pub b4: Option<CohomologyClass>,
}

fn supplied(
    opt: &Option<CohomologyClass>,
    model: &ManifoldModel,
    degree: usize,
) -> Result<CohomologyClass, CharError> {
    match opt {
        None => Ok(CohomologyClass::zero(&model.name, degree)),
        Some(c) => {
            if c.degree != degree {
                return Err(CharError::DegreeMismatch {
                    expected: degree,
                    got: c.degree,
                });
            }
            Ok(c.clone())
        }
    }
}

/// Bordism invariants of a map to the special unitary group in low
/// dimensions, one list per dimension of the model:
/// 3 -> [int b2], 5 -> [(1/2) int b3], 7 -> [int b4, (1/24) int p1 b2],
/// 8 -> [int b2 b3].
pub fn su_invariants_low(
    model: &ManifoldModel,
    classes: &SuClasses,
) -> Result<Vec<BigInt>, CharError> {
    match model.dim {
        3 => {
            let b2 = supplied(&classes.b2, model, 3)?;
            Ok(vec![model.integrate(&b2)?])
        }
        5 => {
            let b3 = supplied(&classes.b3, model, 5)?;
            Ok(vec![require_integer(ratio(model.integrate(&b3)?, 2))?])
        }
        7 => {
            let b2 = supplied(&classes.b2, model, 3)?;
            let b4 = supplied(&classes.b4, model, 7)?;
            let first = model.integrate(&b4)?;
            let second = model.integrate(&model.ring.multiply(&model.p1(), &b2)?)?;
            Ok(vec![first, require_integer(ratio(second, 24))?])
        }
        8 => {
            let b2 = supplied(&classes.b2, model, 3)?;
            let b3 = supplied(&classes.b3, model, 5)?;
            Ok(vec![model.integrate(&model.ring.multiply(&b2, &b3)?)?])
        }
        d => Err(CharError::NoFormulaLine(d)),
    }
}

/// Bordism invariant of a degree 3 integral class: int d3 on a 3-model,
/// (1/8) int p1 d3 on a 7-model.
pub fn kz3_class_invariant(
    model: &ManifoldModel,
    d3: &CohomologyClass,
) -> Result<BigInt, CharError> {
    if d3.degree != 3 {
        return Err(CharError::DegreeMismatch {
            expected: 3,
            got: d3.degree,
        });
    }
    match model.dim {
        3 => model.integrate(d3),
        7 => {
            let value = model.integrate(&model.ring.multiply(&model.p1(), d3)?)?;
            require_integer(ratio(value, 8))
        }
        d => Err(CharError::NoFormulaLine(d)),
    }
}

/// The mod 2 invariant of an 8-model: the coefficient of the named top basis
/// monomial in d3 Sq2(d3), computed in a mod 2 presentation of the ring.
pub fn kz3_sq2_invariant(
    ring: &RingPresentation,
    d3: &CohomologyClass,
    top_label: &str,
) -> Result<BigInt, CharError> {
    if d3.degree != 3 {
        return Err(CharError::DegreeMismatch {
            expected: 3,
            got: d3.degree,
        });
    }
    let product = ring.multiply(d3, &ring.sq2(d3)?)?;
    for m in ring.basis(8)? {
        if ring.monomial_label(&m) == top_label {
            let c = product
                .terms
                .get(m.factors())
                .cloned()
                .unwrap_or_else(BigInt::zero);
            return Ok(c.mod_floor(&BigInt::from(2)));
        }
    }
    Err(CharError::Ring(RingError::BasisMismatch(format!(
        "no degree 8 monomial {}",
        top_label
    ))))
}
