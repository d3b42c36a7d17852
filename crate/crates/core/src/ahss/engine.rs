//! Page entries with generator tracking, exact subquotient computation, the
//! degree-two differential formula for the builtin coefficient row, page
//! turning, and morphisms of spectral sequences with the vanishing deduction
//! they support.

use super::descriptor::{AhssError, CoefficientRow, MapFile, SpaceDescriptor};
use super::extension::FiltrationReport;
use crate::abelian::{smith_normal_form, solve, AbelianGroup, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::rc::Rc;

/// One entry of a page. Generators are tracked back to the starting page:
/// `basis` columns express the current generators in starting-page
/// coordinates and `relations` columns span everything that has died
/// (starting torsion plus killed images). Orders list free generators first
/// as zeros, then the torsion chain.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryState {
    pub orders: Vec<BigInt>,
    pub labels: Vec<String>,
    pub basis: IntMatrix,
    pub relations: IntMatrix,
    pub parametric: Option<String>,
}

impl EntryState {
    /// Builds a starting-page entry from (order, label) pairs, order zero
    /// meaning a free summand. Free summands are moved in front, torsion is
    /// sorted and must form a divisibility chain.
    pub fn from_summands(pairs: Vec<(BigInt, String)>) -> Result<EntryState, String> {
        let mut free: Vec<(BigInt, String)> = Vec::new();
        let mut torsion: Vec<(BigInt, String)> = Vec::new();
        for (o, l) in pairs {
            if o.is_zero() {
                free.push((o, l));
            } else {
                torsion.push((o, l));
            }
        }
        torsion.sort_by(|a, b| a.0.cmp(&b.0));
        for w in torsion.windows(2) {
            if !(&w[1].0 % &w[0].0).is_zero() {
                return Err(format!(
                    "torsion orders {} and {} do not form a chain",
                    w[0].0, w[1].0
                ));
            }
        }
        let all: Vec<(BigInt, String)> = free.into_iter().chain(torsion).collect();
        let n = all.len();
        let orders: Vec<BigInt> = all.iter().map(|x| x.0.clone()).collect();
        let labels: Vec<String> = all.iter().map(|x| x.1.clone()).collect();
        let rel_cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| unit_scaled(n, i, o))
            .collect();
        Ok(EntryState {
            orders,
            labels,
            basis: IntMatrix::identity(n),
            relations: IntMatrix::from_columns(n, &rel_cols),
            parametric: None,
        })
    }

    pub fn gens(&self) -> usize {
        self.orders.len()
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: self.orders.iter().filter(|o| o.is_zero()).count(),
            torsion: self
                .orders
                .iter()
                .filter(|o| !o.is_zero())
                .cloned()
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        match &self.parametric {
            Some(desc) => desc.clone(),
            None => self.group().to_string(),
        }
    }
}

pub type Page = BTreeMap<(usize, usize), EntryState>;

#[derive(Clone, Debug, PartialEq)]
pub enum DiffStatus {
    Computed,
    AssertedZero,
    AssertedValue,
    UnknownParameter(String),
}

/// A resolved differential on some page, matrix in the page coordinates of
/// its source and target entries (rows index target generators).
#[derive(Clone, Debug)]
pub struct ResolvedDifferential {
    pub status: DiffStatus,
    pub matrix: Option<IntMatrix>,
}

/// A fully built spectral sequence: all pages, the differentials that were
/// resolved on each, morphisms to other runs, and the assembled answer per
/// total degree.
pub struct Run {
    pub space: SpaceDescriptor,
    pub coeff: CoefficientRow,
    pub upto: usize,
    pub pages: BTreeMap<u32, Page>,
    pub differentials: BTreeMap<(u32, usize, usize), ResolvedDifferential>,
    pub morphisms: BTreeMap<PathBuf, SSMorphism>,
    pub reports: BTreeMap<usize, FiltrationReport>,
    pub parametric: bool,
}

impl Run {
    pub fn final_page(&self) -> &Page {
        self.pages
            .values()
            .next_back()
            .expect("at least the starting page")
    }

    pub fn entry(&self, r: u32, p: usize, q: usize) -> Option<&EntryState> {
        self.pages.get(&r).and_then(|pg| pg.get(&(p, q)))
    }
}

/// Morphism of runs induced by a map of spaces with a filtration shift:
/// position (p,q) of the source lands in (p+shift,q) of the target. `phi2`
/// holds the starting-page matrices per source position.
pub struct SSMorphism {
    pub name: String,
    pub shift: usize,
    pub target: Rc<Run>,
    pub phi2: BTreeMap<(usize, usize), IntMatrix>,
}

fn unit_scaled(n: usize, i: usize, scale: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = scale.clone();
    v
}

/// True when every homomorphism between groups with these generator orders
/// vanishes: the source must have no free part and every pair of torsion
/// orders must be coprime.
pub fn hom_is_zero(source: &[BigInt], target: &[BigInt]) -> bool {
    if target.is_empty() || source.is_empty() {
        return true;
    }
    if source.iter().any(|o| o.is_zero()) {
        return false;
    }
    for s in source {
        for t in target {
            if !t.is_zero() && !num_integer::gcd(s.clone(), t.clone()).is_one() {
                return false;
            }
        }
    }
    true
}

/// Basis columns of the integer kernel of `m`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (_, d, v) = smith_normal_form(m);
    let k = m.rows.min(m.cols);
    (0..m.cols)
        .filter(|&j| j >= k || d.at(j, j).is_zero())
        .map(|j| v.column(j))
        .collect()
}

fn invert_unimodular(u: &IntMatrix) -> Option<IntMatrix> {
    let n = u.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        cols.push(solve(u, &e)?);
    }
    Some(IntMatrix::from_columns(n, &cols))
}

/// A free basis of the lattice generated by the given columns in Z^dim.
pub fn lattice_basis(cols: &[Vec<BigInt>], dim: usize) -> Option<IntMatrix> {
    if cols.is_empty() {
        return Some(IntMatrix::zero(dim, 0));
    }
    let k = IntMatrix::from_columns(dim, cols);
    let (u, d, _) = smith_normal_form(&k);
    let uinv = invert_unimodular(&u)?;
    let rank = dim.min(k.cols);
    let mut basis = Vec::new();
    for i in 0..rank {
        if d.at(i, i).is_zero() {
            continue;
        }
        let col: Vec<BigInt> = uinv.column(i).iter().map(|x| x * d.at(i, i)).collect();
        basis.push(col);
    }
    Some(IntMatrix::from_columns(dim, &basis))
}

/// Kernel-mod-image of an entry. `ambient` gives per-generator orders,
/// `outgoing` a differential out of the entry with its target orders, and
/// `incoming` columns are images of differentials into it, all in entry
/// coordinates. Returns the resulting orders (free first) and a matrix whose
/// columns express the new generators in entry coordinates.
pub fn subquotient(
    ambient: &[BigInt],
    outgoing: Option<(&IntMatrix, &[BigInt])>,
    incoming: &[Vec<BigInt>],
) -> Result<(Vec<BigInt>, IntMatrix), String> {
    let n = ambient.len();
    if n == 0 {
        return Ok((Vec::new(), IntMatrix::zero(0, 0)));
    }
    let mut kernel_gens: Vec<Vec<BigInt>> = Vec::new();
    match outgoing {
        Some((a, tgt)) if !a.is_zero() => {
            if a.cols != n || a.rows != tgt.len() {
                return Err("differential shape mismatch".into());
            }
            // preimages of the target torsion lattice: kernel of [A | diag]
            let m = a.rows;
            let mut aug = IntMatrix::zero(m, n + m);
            for i in 0..m {
                for j in 0..n {
                    *aug.at_mut(i, j) = a.at(i, j).clone();
                }
                *aug.at_mut(i, n + i) = tgt[i].clone();
            }
            for col in integer_kernel(&aug) {
                kernel_gens.push(col[..n].to_vec());
            }
        }
        _ => {
            for i in 0..n {
                kernel_gens.push(unit_scaled(n, i, &BigInt::one()));
            }
        }
    }
    for (i, o) in ambient.iter().enumerate() {
        if !o.is_zero() {
            kernel_gens.push(unit_scaled(n, i, o));
        }
    }
    let b = lattice_basis(&kernel_gens, n).ok_or("kernel basis failed")?;
    let rank = b.cols;

    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for (i, o) in ambient.iter().enumerate() {
        if !o.is_zero() {
            rel_cols.push(unit_scaled(n, i, o));
        }
    }
    rel_cols.extend(incoming.iter().cloned());
    let mut rel_in_b: Vec<Vec<BigInt>> = Vec::new();
    for v in &rel_cols {
        rel_in_b.push(solve(&b, v).ok_or("relation falls outside the kernel")?);
    }
    let rel = IntMatrix::from_columns(rank, &rel_in_b);
    let (u, d, _) = smith_normal_form(&rel);
    let uinv = invert_unimodular(&u).ok_or("non-invertible row transform")?;

    let mut free: Vec<Vec<BigInt>> = Vec::new();
    let mut torsion: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for i in 0..rank {
        let di = if i < rel.cols.min(rank) {
            d.at(i, i).clone()
        } else {
            BigInt::zero()
        };
        if di.is_one() {
            continue;
        }
        let mut gen = b.mul_vec(&uinv.column(i));
        if let Some(first) = gen.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in gen.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        if di.is_zero() {
            free.push(gen);
        } else {
            torsion.push((di, gen));
        }
    }
    let mut orders: Vec<BigInt> = vec![BigInt::zero(); free.len()];
    let mut cols = free;
    for (o, g) in torsion {
        orders.push(o);
        cols.push(g);
    }
    Ok((orders, IntMatrix::from_columns(n, &cols)))
}

/// Human-readable name for an entry generator given in ambient coordinates.
pub fn synthesize_label(
    ambient_labels: &[String],
    ambient_orders: &[BigInt],
    col: &[BigInt],
) -> String {
    let mut terms = Vec::new();
    for (i, c) in col.iter().enumerate() {
        let mut c = c.clone();
        let o = &ambient_orders[i];
        if !o.is_zero() {
            c = ((&c % o) + o) % o;
        }
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            terms.push(ambient_labels[i].clone());
        } else {
            terms.push(format!("{}{}", c, ambient_labels[i]));
        }
    }
    if terms.is_empty() {
        "?".into()
    } else {
        terms.join("+")
    }
}

fn combine_labels(coeff: &str, hom: &str) -> String {
    if coeff == "1" {
        hom.to_string()
    } else if hom == "1" {
        coeff.to_string()
    } else {
        format!("{coeff}{hom}")
    }
}

/// Per-generator (order, label, homology label, coefficient index) data for a
/// starting-page entry, in the same order the entry lists its generators.
fn entry_summands(
    space: &SpaceDescriptor,
    row: &CoefficientRow,
    p: usize,
    q: usize,
) -> Result<Vec<(BigInt, String, String, usize)>, AhssError> {
    let row_lg = match row.get(q) {
        Some(lg) => lg,
        None => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    if p == 0 {
        for (i, label) in row_lg.labels.iter().enumerate() {
            out.push((row_lg.group.order_of(i), label.clone(), "1".to_string(), i));
        }
        return Ok(out);
    }
    for (i, coeff_label) in row_lg.labels.iter().enumerate() {
        let o = row_lg.group.order_of(i);
        if o.is_zero() {
            let h = space.homology_z.get(p)?;
            for (j, hl) in h.labels.iter().enumerate() {
                out.push((
                    h.group.order_of(j),
                    combine_labels(coeff_label, hl),
                    hl.clone(),
                    i,
                ));
            }
        } else if o == BigInt::from(2) {
            let h = space.homology_z2.get(p)?;
            for hl in &h.labels {
                out.push((
                    BigInt::from(2),
                    combine_labels(coeff_label, hl),
                    hl.clone(),
                    i,
                ));
            }
        } else {
            let lg = super::descriptor::general_coefficient_entry(
                &space.homology_z,
                p,
                &o,
                coeff_label,
            )?;
            for (j, l) in lg.labels.iter().enumerate() {
                out.push((lg.group.order_of(j), l.clone(), l.clone(), i));
            }
        }
    }
    Ok(out)
}

/// Applies the same free-first, torsion-sorted reordering the entry
/// constructor performs, so parallel data stays aligned with generators.
fn partition_like_entry<T: Clone>(pairs: &[(BigInt, T)]) -> Vec<(BigInt, T)> {
    let mut free: Vec<(BigInt, T)> = Vec::new();
    let mut torsion: Vec<(BigInt, T)> = Vec::new();
    for (o, t) in pairs {
        if o.is_zero() {
            free.push((o.clone(), t.clone()));
        } else {
            torsion.push((o.clone(), t.clone()));
        }
    }
    torsion.sort_by(|a, b| a.0.cmp(&b.0));
    free.into_iter().chain(torsion).collect()
}

/// Builds the starting page: entries at (p,q) for p+q up to `upto`+1, p
/// bounded by the space's table cap and q by the coefficient row.
pub fn build_e2(
    space: &SpaceDescriptor,
    row: &CoefficientRow,
    upto: usize,
) -> Result<Page, AhssError> {
    let mut page: Page = BTreeMap::new();
    let p_min = if row.full { 0 } else { 1 };
    for p in p_min..=(upto + 1).min(space.cap) {
        for q in 0..=(upto + 1 - p) {
            if q > row.max_q {
                if p + q == upto + 1 {
                    continue;
                }
                let known_zero = p >= 1
                    && space.homology_z.get(p)?.group.is_trivial()
                    && space.homology_z2.get(p)?.group.is_trivial();
                if known_zero {
                    continue;
                }
                return Err(AhssError::Other(format!(
                    "coefficient row {} stops at q={} but degree ({p},{q}) is needed",
                    row.name, row.max_q
                )));
            }
            let summands = entry_summands(space, row, p, q)?;
            if summands.is_empty() {
                continue;
            }
            let pairs: Vec<(BigInt, String)> = summands
                .into_iter()
                .filter(|(o, _, _, _)| !o.is_one())
                .map(|(o, l, _, _)| (o, l))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let entry = EntryState::from_summands(pairs)
                .map_err(|e| AhssError::Other(format!("entry ({p},{q}): {e}")))?;
            if entry.gens() > 0 {
                page.insert((p, q), entry);
            }
        }
    }
    Ok(page)
}

/// Matrix of the degree-two differential for the builtin coefficient row, in
/// starting-page coordinates: the dual of the squaring operation, composed
/// with mod-2 reduction when the source sits in the q=0 row.
pub fn spin_d2_matrix(space: &SpaceDescriptor, p: usize, q: usize) -> Result<IntMatrix, AhssError> {
    if p < 2 || (q != 0 && q != 1) {
        return Err(AhssError::Other(format!(
            "formula differential undefined at ({p},{q})"
        )));
    }
    let dual = space
        .ring
        .sq2_matrix(p - 2)
        .map_err(AhssError::Ring)?
        .transpose();
    match q {
        1 => Ok(dual),
        _ => {
            let z = space.homology_z.get(p)?;
            let z2 = space.homology_z2.get(p)?;
            let mut r = IntMatrix::zero(z2.labels.len(), z.labels.len());
            for (i, zl2) in z2.labels.iter().enumerate() {
                for (j, zl) in z.labels.iter().enumerate() {
                    if zl2 == zl {
                        *r.at_mut(i, j) = BigInt::one();
                    }
                }
            }
            Ok(dual.mul(&r))
        }
    }
}

/// Checks that a differential matrix sends each source generator to an
/// element killed by the source generator's order.
pub fn check_torsion_respect(
    matrix: &IntMatrix,
    source_orders: &[BigInt],
    target_orders: &[BigInt],
) -> Result<(), String> {
    if matrix.cols != source_orders.len() || matrix.rows != target_orders.len() {
        return Err(format!(
            "matrix is {}x{}, expected {}x{}",
            matrix.rows,
            matrix.cols,
            target_orders.len(),
            source_orders.len()
        ));
    }
    for j in 0..matrix.cols {
        let so = &source_orders[j];
        if so.is_zero() {
            continue;
        }
        for i in 0..matrix.rows {
            let to = &target_orders[i];
            let scaled = so * matrix.at(i, j);
            let ok = if to.is_zero() {
                scaled.is_zero()
            } else {
                (&scaled % to).is_zero()
            };
            if !ok {
                return Err(format!(
                    "generator {j} of order {so} maps outside the {to}-torsion"
                ));
            }
        }
    }
    Ok(())
}

/// Composes consecutive differentials on page `r` and checks the result is
/// zero in the final target.
pub fn check_dd(
    page: &Page,
    diffs: &BTreeMap<(u32, usize, usize), ResolvedDifferential>,
    r: u32,
) -> Result<(), AhssError> {
    let rr = r as usize;
    for (&(dr, p, q), rec) in diffs.iter() {
        if dr != r {
            continue;
        }
        let Some(first) = rec.matrix.as_ref() else {
            continue;
        };
        let (tp, tq) = (p - rr, q + rr - 1);
        let Some(second) = diffs.get(&(r, tp, tq)).and_then(|x| x.matrix.as_ref()) else {
            continue;
        };
        let product = second.mul(first);
        if product.is_zero() {
            continue;
        }
        let final_orders: Vec<BigInt> = page
            .get(&(tp - rr, tq + rr - 1))
            .map(|e| e.orders.clone())
            .unwrap_or_default();
        for i in 0..product.rows {
            for j in 0..product.cols {
                let v = product.at(i, j);
                let o = &final_orders[i];
                let ok = if o.is_zero() {
                    v.is_zero()
                } else {
                    (v % o).is_zero()
                };
                if !ok {
                    return Err(AhssError::DdNonzero {
                        r,
                        p: tp - rr,
                        q: tq + rr - 1,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Computes the next page from the current one and the differentials
/// resolved on it. Unknown-parameter differentials mark their endpoints
/// rather than changing them.
pub fn turn_page(
    page: &Page,
    diffs: &BTreeMap<(u32, usize, usize), ResolvedDifferential>,
    r: u32,
) -> Result<Page, AhssError> {
    let rr = r as usize;
    let mut next: Page = BTreeMap::new();
    for (&(p, q), entry) in page {
        if entry.parametric.is_some() {
            next.insert((p, q), entry.clone());
            continue;
        }
        let outgoing = diffs.get(&(r, p, q));
        let incoming = if q + 1 >= rr {
            diffs.get(&(r, p + rr, q + 1 - rr))
        } else {
            None
        };
        let mut mark: Option<String> = None;
        if let Some(rec) = incoming {
            if let DiffStatus::UnknownParameter(name) = &rec.status {
                mark = Some(format!("{}/{}", entry.group(), name));
            }
        }
        if let Some(rec) = outgoing {
            if let DiffStatus::UnknownParameter(name) = &rec.status {
                mark = Some(format!("ker({name})"));
            }
        }
        if let Some(desc) = mark {
            let mut e = entry.clone();
            e.parametric = Some(desc);
            next.insert((p, q), e);
            continue;
        }
        let out_matrix = outgoing
            .and_then(|rec| rec.matrix.as_ref())
            .filter(|m| !m.is_zero());
        let incoming_matrix = incoming
            .and_then(|rec| rec.matrix.as_ref())
            .filter(|m| !m.is_zero());
        if out_matrix.is_none() && incoming_matrix.is_none() {
            next.insert((p, q), entry.clone());
            continue;
        }
        let target_orders: Vec<BigInt> = if out_matrix.is_some() {
            page.get(&(p - rr, q + rr - 1))
                .map(|e| e.orders.clone())
                .ok_or_else(|| {
                    AhssError::Other(format!("differential from ({p},{q}) has no target entry"))
                })?
        } else {
            Vec::new()
        };
        let outgoing_pair = out_matrix.map(|m| (m, target_orders.as_slice()));
        let incoming_cols: Vec<Vec<BigInt>> = incoming_matrix
            .map(|m| (0..m.cols).map(|j| m.column(j)).collect())
            .unwrap_or_default();
        let (orders, gens) = subquotient(&entry.orders, outgoing_pair, &incoming_cols)
            .map_err(|e| AhssError::Other(format!("page {r} entry ({p},{q}): {e}")))?;
        if orders.is_empty() {
            continue;
        }
        let labels: Vec<String> = (0..gens.cols)
            .map(|j| synthesize_label(&entry.labels, &entry.orders, &gens.column(j)))
            .collect();
        let basis = entry.basis.mul(&gens);
        let relations = if incoming_cols.is_empty() {
            entry.relations.clone()
        } else {
            let incoming_e2: Vec<Vec<BigInt>> = incoming_cols
                .iter()
                .map(|c| entry.basis.mul_vec(c))
                .collect();
            entry
                .relations
                .hstack(&IntMatrix::from_columns(entry.basis.rows, &incoming_e2))
        };
        next.insert(
            (p, q),
            EntryState {
                orders,
                labels,
                basis,
                relations,
                parametric: None,
            },
        );
    }
    Ok(next)
}

fn gens_at(page: &Page, pos: (usize, usize)) -> usize {
    page.get(&pos).map(|e| e.gens()).unwrap_or(0)
}

fn orders_at(page: &Page, pos: (usize, usize)) -> Vec<BigInt> {
    page.get(&pos).map(|e| e.orders.clone()).unwrap_or_default()
}

impl SSMorphism {
    pub fn target_pos(&self, pos: (usize, usize)) -> (usize, usize) {
        (pos.0 + self.shift, pos.1)
    }

    /// Whether the morphism kills every generator of the page-`r` entry at
    /// `pos` of the source run.
    pub fn is_zero_on(
        &self,
        entry: &EntryState,
        pos: (usize, usize),
        r: u32,
    ) -> Result<bool, String> {
        let phi = self
            .phi2
            .get(&pos)
            .ok_or("position outside the mapped region")?;
        let tpos = self.target_pos(pos);
        let tpage = self.target.pages.get(&r).ok_or("target page not built")?;
        let tentry = tpage.get(&tpos);
        for j in 0..entry.gens() {
            let v = phi.mul_vec(&entry.basis.column(j));
            if let Some(te) = tentry {
                if solve(&te.relations, &v).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_zero_at_infinity(
        &self,
        entry: &EntryState,
        pos: (usize, usize),
    ) -> Result<bool, String> {
        let last = *self
            .target
            .pages
            .keys()
            .next_back()
            .ok_or("target has no pages")?;
        self.is_zero_on(entry, pos, last)
    }

    /// Matrix of the induced map on page-`r` entries in page coordinates, or
    /// None when the target entry is zero.
    pub fn induced_matrix(
        &self,
        entry: &EntryState,
        pos: (usize, usize),
        r: u32,
    ) -> Result<Option<(IntMatrix, Vec<BigInt>)>, String> {
        let phi = self
            .phi2
            .get(&pos)
            .ok_or("position outside the mapped region")?;
        let tpos = self.target_pos(pos);
        let tpage = self.target.pages.get(&r).ok_or("target page not built")?;
        let Some(te) = tpage.get(&tpos) else {
            return Ok(None);
        };
        let aug = te.basis.hstack(&te.relations);
        let mut cols = Vec::new();
        for j in 0..entry.gens() {
            let v = phi.mul_vec(&entry.basis.column(j));
            let sol =
                solve(&aug, &v).ok_or("image does not respect the filtration of the target")?;
            cols.push(sol[..te.gens()].to_vec());
        }
        Ok(Some((
            IntMatrix::from_columns(te.gens(), &cols),
            te.orders.clone(),
        )))
    }

    /// Whether the morphism is injective on the page-`r` entry at `pos`.
    pub fn is_injective_on(
        &self,
        entry: &EntryState,
        pos: (usize, usize),
        r: u32,
    ) -> Result<bool, String> {
        match self.induced_matrix(entry, pos, r)? {
            None => Ok(entry.gens() == 0),
            Some((m, torders)) => {
                let (orders, _) = subquotient(&entry.orders, Some((&m, &torders)), &[])?;
                Ok(orders.is_empty())
            }
        }
    }
}

/// Justifies a zero differential on page `r` at (p,q) of the source run by
/// naturality: the morphism must kill the source entry and be injective on
/// the entry the differential lands in.
pub fn deduce_vanishing(
    m: &SSMorphism,
    source_pages: &BTreeMap<u32, Page>,
    r: u32,
    p: usize,
    q: usize,
) -> Result<(), String> {
    let page = source_pages.get(&r).ok_or("source page not built")?;
    let Some(src) = page.get(&(p, q)) else {
        return Ok(());
    };
    if !m.is_zero_on(src, (p, q), r)? {
        return Err(format!("the comparison map is nonzero on ({p},{q})"));
    }
    let rr = r as usize;
    if p < rr {
        return Ok(());
    }
    let tgt_pos = (p - rr, q + rr - 1);
    match page.get(&tgt_pos) {
        None => Ok(()),
        Some(te) => {
            if m.is_injective_on(te, tgt_pos, r)? {
                Ok(())
            } else {
                Err(format!(
                    "the comparison map is not injective on ({},{})",
                    tgt_pos.0, tgt_pos.1
                ))
            }
        }
    }
}

/// Builds the starting-page matrices of a morphism by replaying entry
/// construction on both sides and matching labels through the map tables.
pub fn build_phi2(
    map: &MapFile,
    source_space: &SpaceDescriptor,
    row: &CoefficientRow,
    source_page2: &Page,
    target_space: &SpaceDescriptor,
    target_page2: &Page,
) -> Result<BTreeMap<(usize, usize), IntMatrix>, AhssError> {
    let mut out = BTreeMap::new();
    for (&(p, q), entry) in source_page2 {
        if p == 0 {
            continue;
        }
        let tp = p + map.shift;
        if tp > target_space.cap {
            continue;
        }
        let summands = entry_summands(source_space, row, p, q)?;
        let with_images: Vec<(BigInt, (String, Option<String>))> = summands
            .iter()
            .filter(|(o, _, _, _)| !o.is_one())
            .map(|(o, full, hl, ci)| {
                let coeff_label = &row.get(q).expect("row exists").labels[*ci];
                let coeff_order = row.get(q).expect("row exists").group.order_of(*ci);
                let table = if coeff_order.is_zero() {
                    &map.hom_z
                } else {
                    &map.hom_z2
                };
                if !coeff_order.is_zero() && coeff_order != BigInt::from(2) {
                    return Err(AhssError::Validation {
                        path: map.path.display().to_string(),
                        msg: "maps over coefficients other than Z and Z/2 are not supported".into(),
                    });
                }
                let image = table.get(hl).ok_or_else(|| AhssError::Validation {
                    path: map.path.display().to_string(),
                    msg: format!("label {hl} has no image"),
                })?;
                let image_full = if image == "0" {
                    None
                } else {
                    Some(combine_labels(coeff_label, image))
                };
                Ok((o.clone(), (full.clone(), image_full)))
            })
            .collect::<Result<_, _>>()?;
        let arranged = partition_like_entry(&with_images);
        let arranged_labels: Vec<&String> = arranged.iter().map(|(_, (l, _))| l).collect();
        if arranged_labels.len() != entry.labels.len()
            || arranged_labels
                .iter()
                .zip(&entry.labels)
                .any(|(a, b)| *a != b)
        {
            return Err(AhssError::Other(format!(
                "internal label mismatch at ({p},{q}) while building {}",
                map.name
            )));
        }
        let tentry = target_page2.get(&(tp, q));
        let rows = tentry.map(|e| e.gens()).unwrap_or(0);
        let mut cols = Vec::new();
        for (_, (_, image_full)) in &arranged {
            match image_full {
                None => cols.push(vec![BigInt::zero(); rows]),
                Some(lbl) => {
                    let te = tentry.ok_or_else(|| {
                        AhssError::Other(format!(
                            "image {lbl} expected at ({tp},{q}) but the entry is zero"
                        ))
                    })?;
                    let pos = te.labels.iter().position(|l| l == lbl).ok_or_else(|| {
                        AhssError::Other(format!(
                            "image {lbl} not found among generators at ({tp},{q})"
                        ))
                    })?;
                    cols.push(unit_scaled(rows, pos, &BigInt::one()));
                }
            }
        }
        out.insert((p, q), IntMatrix::from_columns(rows, &cols));
    }
    Ok(out)
}

/// Verifies that the morphism commutes with the computed degree-two
/// differentials on both sides wherever all four corners are in range.
pub fn check_d2_commutes(
    m: &SSMorphism,
    map_name: &str,
    source_page2: &Page,
    source_diffs: &BTreeMap<(u32, usize, usize), ResolvedDifferential>,
) -> Result<(), AhssError> {
    let tpage2 = m.target.pages.get(&2).expect("target starting page");
    for (&(p, q), entry) in source_page2 {
        let Some(phi_src) = m.phi2.get(&(p, q)) else {
            continue;
        };
        let (tp, tq) = m.target_pos((p, q));
        if tp < 2 {
            continue;
        }
        let t2 = (tp - 2, tq + 1);
        let t2_gens = gens_at(tpage2, t2);
        if t2_gens == 0 {
            continue;
        }
        let computed = |rec: Option<&ResolvedDifferential>| -> Option<Option<IntMatrix>> {
            match rec {
                None => Some(None),
                Some(r) => match r.status {
                    DiffStatus::Computed => Some(r.matrix.clone()),
                    _ => None,
                },
            }
        };
        let Some(a_t) = computed(m.target.differentials.get(&(2, tp, tq))) else {
            continue;
        };
        let Some(a_s) = computed(source_diffs.get(&(2, p, q))) else {
            continue;
        };
        let a_t = a_t.unwrap_or_else(|| IntMatrix::zero(t2_gens, gens_at(tpage2, (tp, tq))));
        let right = a_t.mul(phi_src);
        let left = if p >= 2 && gens_at(source_page2, (p - 2, q + 1)) > 0 {
            let Some(phi_t) = m.phi2.get(&(p - 2, q + 1)) else {
                continue;
            };
            let a_s = a_s.unwrap_or_else(|| {
                IntMatrix::zero(gens_at(source_page2, (p - 2, q + 1)), entry.gens())
            });
            phi_t.mul(&a_s)
        } else {
            IntMatrix::zero(t2_gens, entry.gens())
        };
        let orders = orders_at(tpage2, t2);
        for i in 0..right.rows {
            for j in 0..right.cols {
                let diff = left.at(i, j) - right.at(i, j);
                let o = &orders[i];
                let ok = if o.is_zero() {
                    diff.is_zero()
                } else {
                    (&diff % o).is_zero()
                };
                if !ok {
                    return Err(AhssError::Validation {
                        path: map_name.to_string(),
                        msg: format!("map does not commute with the differential at ({p},{q})"),
                    });
                }
            }
        }
    }
    Ok(())
}
