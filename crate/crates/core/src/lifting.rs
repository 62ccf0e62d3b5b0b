//! `e_d` extraction over formal fields and the degree-by-degree
//! decomposition of an invariant into generator invariants.
//!
//! Over `Formal(g)`, `H^n` has the F_2-basis `(-1)^{n-|S|} prod_{i in S} (t_i)`
//! for `|S| <= n`, and cup product is union of the sets `S`. The `e_d` image
//! of a class in `I^d` is read off its signatures: `sig/2^d mod 2` is a
//! Boolean function of the ordering whose algebraic normal form lists the
//! monomials.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cohomology::{symbol_normalize, CohClass};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, SquareClass};
use crate::weyl::{lift_u, lift_v_upto, MultiquadraticTorsor};
use crate::witt::{filtration_degree, pfister, witt_eq, WittClass};

/// Extra degrees the decomposition may peel beyond `n0` before giving up.
pub const DEFAULT_MARGIN: usize = 8;

fn formal_g(field: FieldDescriptor) -> Result<u32> {
    match field {
        FieldDescriptor::Formal(g) if g <= 20 => Ok(g),
        FieldDescriptor::Formal(g) => {
            Err(Error::SizeMismatch(format!("formal:{g} has too many orderings for interpolation")))
        }
        other => Err(Error::UnsupportedBackend(other.to_string())),
    }
}

/// The sets `S` (bit `i` for `t_{i+1}`) of the monomials of a formal class.
pub fn formal_monomials(c: &CohClass) -> Result<BTreeSet<u64>> {
    formal_g(c.field())?;
    let mut out = BTreeSet::new();
    for s in c.symbols() {
        let mut set = 0u64;
        for f in s.factors() {
            let SquareClass::Formal { mask, .. } = f else { unreachable!() };
            set |= mask >> 1;
        }
        if !out.insert(set) {
            out.remove(&set);
        }
    }
    Ok(out)
}

/// The class with the given monomial sets in degree `d`.
pub fn formal_class(field: FieldDescriptor, d: usize, sets: &BTreeSet<u64>) -> Result<CohClass> {
    let g = formal_g(field)?;
    let mut acc = CohClass::zero(field, d);
    for &s in sets {
        let k = s.count_ones() as usize;
        if k > d {
            return Err(Error::DegreeOutOfRange { degree: k, max: d });
        }
        let mut factors = vec![field.minus_one(); d - k];
        for i in 0..g {
            if s >> i & 1 == 1 {
                factors.push(field.t(i + 1)?);
            }
        }
        acc = acc.add(&symbol_normalize(&field, &factors)?)?;
    }
    Ok(acc)
}

/// `e_d(w)` for `w` in `I^d` over a formal field.
pub fn e_extract(w: &WittClass, d: usize) -> Result<CohClass> {
    let g = formal_g(w.field())?;
    let sigs = w.signature_vector()?;
    let unit = BigInt::one() << d;
    let mut f: Vec<bool> = Vec::with_capacity(sigs.len());
    for s in &sigs {
        let (q, r) = s.div_rem(&unit);
        if !r.is_zero() {
            return Err(Error::NotInIdealPower(format!("signature {s} is not divisible by 2^{d}")));
        }
        f.push(q.is_odd());
    }
    // Möbius transform: truth table -> algebraic normal form.
    for i in 0..g {
        let bit = 1usize << i;
        for m in 0..f.len() {
            if m & bit != 0 {
                f[m] ^= f[m ^ bit];
            }
        }
    }
    let mut sets = BTreeSet::new();
    for (m, &a) in f.iter().enumerate() {
        if a {
            if (m.count_ones() as usize) > d {
                return Err(Error::NotInIdealPower(format!("signature function has degree {} > {d}", m.count_ones())));
            }
            sets.insert(m as u64);
        }
    }
    formal_class(w.field(), d, &sets)
}

/// Values of one invariant on a fixed list of sample torsors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationTable {
    samples: Vec<MultiquadraticTorsor>,
    values: Vec<WittClass>,
    degree: usize,
}

impl EvaluationTable {
    pub fn new(samples: Vec<MultiquadraticTorsor>, values: Vec<WittClass>, degree: usize) -> Result<Self> {
        if samples.len() != values.len() {
            return Err(Error::SizeMismatch(format!("{} samples but {} values", samples.len(), values.len())));
        }
        let Some(first) = samples.first() else {
            return Err(Error::InvalidInput("an evaluation table needs samples".into()));
        };
        let field = first.field();
        formal_g(field)?;
        for (t, v) in samples.iter().zip(&values) {
            field.check_same(&t.field())?;
            field.check_same(&v.field())?;
            if filtration_degree(v, degree)? < degree {
                return Err(Error::NotInIdealPower(format!("value {v} is not in I^{degree}")));
            }
        }
        Ok(EvaluationTable { samples, values, degree })
    }

    /// Tabulate an invariant on the samples.
    pub fn from_fn<F>(samples: &[MultiquadraticTorsor], degree: usize, f: F) -> Result<Self>
    where
        F: Fn(&MultiquadraticTorsor) -> Result<WittClass>,
    {
        let values = samples.iter().map(&f).collect::<Result<Vec<_>>>()?;
        Self::new(samples.to_vec(), values, degree)
    }

    pub fn samples(&self) -> &[MultiquadraticTorsor] {
        &self.samples
    }

    pub fn values(&self) -> &[WittClass] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldDescriptor {
        self.samples[0].field()
    }

    /// `sum_i c_i * table_i` evaluated sample by sample.
    pub fn combine(tables: &[EvaluationTable], coeffs: &[WittClass], degree: usize) -> Result<Self> {
        let first = tables.first().ok_or_else(|| Error::InvalidInput("no tables".into()))?;
        if coeffs.len() != tables.len() {
            return Err(Error::SizeMismatch("one coefficient per table".into()));
        }
        let mut values = vec![WittClass::zero(first.field()); first.samples.len()];
        for (t, c) in tables.iter().zip(coeffs) {
            for (v, x) in values.iter_mut().zip(&t.values) {
                *v = v.add(&c.mul(x)?)?;
            }
        }
        Self::new(first.samples.clone(), values, degree)
    }
}

/// Result of [`decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub coefficients: Vec<WittClass>,
    pub constant: WittClass,
    pub residual_ok: bool,
}

impl Decomposition {
    /// The combination evaluated at each sample.
    pub fn reproduce(&self, generators: &[EvaluationTable]) -> Result<Vec<WittClass>> {
        let n = generators.first().map(|g| g.samples.len()).unwrap_or(0);
        let mut out = vec![self.constant.clone(); n];
        for (g, c) in generators.iter().zip(&self.coefficients) {
            for (o, v) in out.iter_mut().zip(&g.values) {
                *o = o.add(&c.mul(v)?)?;
            }
        }
        Ok(out)
    }
}

/// A Pfister form with `e`-image `(-1)^k prod_{i in S} (t_i)`.
fn monomial_lift(field: FieldDescriptor, k: usize, set: u64) -> Result<WittClass> {
    let mut gens = vec![field.minus_one(); k];
    let g = formal_g(field)?;
    for i in 0..g {
        if set >> i & 1 == 1 {
            gens.push(field.t(i + 1)?);
        }
    }
    pfister(field, &gens)
}

/// Subsets of `0..g` of size at most `k`, by size then value.
fn small_subsets(g: u32, k: usize) -> Vec<u64> {
    let mut v: Vec<u64> = (0..1u64 << g).filter(|s| s.count_ones() as usize <= k).collect();
    v.sort_by_key(|s| (s.count_ones(), *s));
    v
}

/// Solve `A x = b` over F_2 for dense bit columns, preferring the earliest
/// columns as pivots and setting free variables to zero. Also returns a
/// kernel basis, one vector per free column.
fn solve_f2(columns: &[Vec<bool>], rhs: &[bool]) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<bool>> = (0..rows)
        .map(|r| {
            let mut row: Vec<bool> = columns.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] {
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d ^= *s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| row[cols]) {
        return None;
    }
    let mut x = vec![false; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    let mut kernel = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut k = vec![false; cols];
        k[f] = true;
        for (i, &c) in pivots.iter().enumerate() {
            k[c] = m[i][f];
        }
        kernel.push(k);
    }
    Some((x, kernel))
}

/// Sum of absolute signatures over all samples and orderings.
fn signature_mass(values: &[WittClass]) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for v in values {
        for s in v.signature_vector()? {
            total += s.abs();
        }
    }
    Ok(total)
}

struct Peel {
    residual: Vec<WittClass>,
    mass: BigInt,
    /// (generator, lifted coefficient, true for subtracting `+q`)
    terms: Vec<(usize, WittClass, bool)>,
}

/// Subtract the lifts of the selected columns, choosing each sign greedily
/// to shrink the signatures; both signs remove the same `e_n` layer.
fn peel<F>(residual: &[WittClass], select: &[bool], lift: &mut F) -> Result<Peel>
where
    F: FnMut(usize) -> Result<(WittClass, Vec<WittClass>)>,
{
    let mut res = residual.to_vec();
    let mut mass = signature_mass(&res)?;
    let mut terms = Vec::new();
    for (k, _) in select.iter().enumerate().filter(|(_, &b)| b) {
        let (q, step) = lift(k)?;
        let minus: Vec<WittClass> = res.iter().zip(&step).map(|(r, s)| r.sub(s)).collect::<Result<_>>()?;
        let plus: Vec<WittClass> = res.iter().zip(&step).map(|(r, s)| r.add(s)).collect::<Result<_>>()?;
        let (mm, mp) = (signature_mass(&minus)?, signature_mass(&plus)?);
        if mp < mm {
            res = plus;
            mass = mp;
            terms.push((k, q, false));
        } else {
            res = minus;
            mass = mm;
            terms.push((k, q, true));
        }
    }
    Ok(Peel { residual: res, mass, terms })
}

/// Solve `residual(s) = sum_i a_i G_i(s) + q` over `W(k0) = Z[(Z/2)^g]`,
/// coordinate by coordinate in the basis `<t^S>`.
fn complete_exactly(
    g: u32,
    residual: &[WittClass],
    generators: &[EvaluationTable],
) -> Option<(Vec<WittClass>, WittClass)> {
    if g > 10 {
        return None;
    }
    let field = FieldDescriptor::Formal(g);
    let basis: Vec<SquareClass> = (0..1u64 << g)
        .map(|set| {
            let gens: Vec<u32> = (0..g).filter(|i| set >> i & 1 == 1).map(|i| i + 1).collect();
            field.formal_class(false, &gens)
        })
        .collect::<Result<_>>()
        .ok()?;
    let width = basis.len();
    let unknowns = (generators.len() + 1) * width;
    let mut a = vec![vec![BigInt::zero(); unknowns]; residual.len() * width];
    let mut b = vec![BigInt::zero(); residual.len() * width];
    for (s, r) in residual.iter().enumerate() {
        for (k, c) in basis.iter().enumerate() {
            b[s * width + k] = r.coeff(c);
        }
        for (i, gen) in generators.iter().enumerate() {
            for (j, d) in basis.iter().enumerate() {
                let shifted = gen.values[s].mul_class(d).ok()?;
                for (k, c) in basis.iter().enumerate() {
                    a[s * width + k][i * width + j] = shifted.coeff(c);
                }
            }
        }
        for k in 0..width {
            a[s * width + k][generators.len() * width + k] = BigInt::one();
        }
    }
    let x = crate::util::solve_integer(&a, &b)?;
    let element = |block: usize| {
        WittClass::from_terms(field, basis.iter().cloned().zip(x[block * width..(block + 1) * width].iter().cloned()))
    };
    let extra = (0..generators.len()).map(element).collect::<Result<Vec<_>>>().ok()?;
    let q = element(generators.len()).ok()?;
    Some((extra, q))
}

fn all_equal(values: &[WittClass]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Express `target` as `sum_i c_i generator_i + q` with `c_i` in `W(k0)` and
/// constant `q`, peeling one `e_n` layer at a time.
pub fn decompose(target: &EvaluationTable, generators: &[EvaluationTable], n0: usize) -> Result<Decomposition> {
    decompose_with_margin(target, generators, n0, DEFAULT_MARGIN)
}

pub fn decompose_with_margin(
    target: &EvaluationTable,
    generators: &[EvaluationTable],
    n0: usize,
    margin: usize,
) -> Result<Decomposition> {
    let field = target.field();
    let g = formal_g(field)?;
    for gen in generators {
        if gen.samples != target.samples {
            return Err(Error::InvalidInput("generator tables must share the target's samples".into()));
        }
        if gen.degree > n0 {
            return Err(Error::InvalidInput(format!("generator declared in degree {} above n0 = {n0}", gen.degree)));
        }
    }
    let zero = WittClass::zero(field);
    let mut coeffs = vec![zero.clone(); generators.len()];
    let mut residual = target.values.clone();

    // A target that is already one of the generators up to sign.
    for (i, gen) in generators.iter().enumerate() {
        if gen.values == residual {
            coeffs[i] = WittClass::one(field);
            residual = vec![zero.clone(); residual.len()];
            break;
        }
        let negated: Vec<WittClass> = gen.values.iter().map(|v| v.neg()).collect();
        if negated == residual {
            coeffs[i] = WittClass::one(field).neg();
            residual = vec![zero.clone(); residual.len()];
            break;
        }
    }

    // A layer the F_2 peel cannot match (e.g. a generator whose declared
    // degree hides its higher layers) hands over to the exact completion.
    let mut stuck: Option<Error> = None;
    let mut n = 0;
    'layers: while !all_equal(&residual) && n <= n0 + margin {
        let images: Vec<BTreeSet<u64>> =
            residual.iter().map(|r| formal_monomials(&e_extract(r, n)?)).collect::<Result<_>>()?;
        if images.iter().any(|s| !s.is_empty()) {
            let row_sets = small_subsets(g, n);
            let rows = residual.len() * row_sets.len();
            let row_index = |s: usize, set: u64| -> usize {
                s * row_sets.len()
                    + row_sets
                        .binary_search_by_key(&(set.count_ones(), set), |x| (x.count_ones(), *x))
                        .expect("degree bounded")
            };
            let mut rhs = vec![false; rows];
            for (s, img) in images.iter().enumerate() {
                for &set in img {
                    rhs[row_index(s, set)] ^= true;
                }
            }
            let mut columns: Vec<Vec<bool>> = Vec::new();
            let mut labels: Vec<(usize, u64)> = Vec::new();
            for (i, gen) in generators.iter().enumerate() {
                let m = gen.degree;
                if m > n {
                    continue;
                }
                let gen_images: Vec<BTreeSet<u64>> =
                    gen.values.iter().map(|v| formal_monomials(&e_extract(v, m)?)).collect::<Result<_>>()?;
                for set in small_subsets(g, n - m) {
                    let mut col = vec![false; rows];
                    for (s, img) in gen_images.iter().enumerate() {
                        for &t in img {
                            col[row_index(s, set | t)] ^= true;
                        }
                    }
                    columns.push(col);
                    labels.push((i, set));
                }
            }
            let Some((x, kernel)) = solve_f2(&columns, &rhs) else {
                stuck = Some(Error::NotInSpan(format!("degree-{n} layer is not a combination of generators")));
                break;
            };
            // Every lifted column times its generator, at every sample.
            let mut lifted: Vec<Option<(WittClass, Vec<WittClass>)>> = vec![None; labels.len()];
            let mut lift_column = |k: usize| -> Result<(WittClass, Vec<WittClass>)> {
                if let Some(v) = &lifted[k] {
                    return Ok(v.clone());
                }
                let (i, set) = labels[k];
                let m = generators[i].degree;
                let q = monomial_lift(field, n - m - set.count_ones() as usize, set)?;
                let step = generators[i].values.iter().map(|v| q.mul(v)).collect::<Result<Vec<_>>>()?;
                lifted[k] = Some((q.clone(), step.clone()));
                Ok((q, step))
            };
            let mut best = peel(&residual, &x, &mut lift_column)?;
            let mut current = x;
            // Kernel moves keep the e_n layer fixed but change the lift; take
            // any that lowers the signature mass.
            let mut improved = true;
            let mut rounds = 0;
            while improved && rounds < 8 {
                improved = false;
                rounds += 1;
                for k in &kernel {
                    let cand: Vec<bool> = current.iter().zip(k).map(|(a, b)| a ^ b).collect();
                    let trial = peel(&residual, &cand, &mut lift_column)?;
                    if trial.mass < best.mass {
                        best = trial;
                        current = cand;
                        improved = true;
                    }
                }
            }
            for (k, q, sign) in best.terms {
                let i = labels[k].0;
                coeffs[i] = if sign { coeffs[i].add(&q)? } else { coeffs[i].sub(&q)? };
            }
            residual = best.residual;
            for r in &residual {
                if filtration_degree(r, n + 1)? < n + 1 {
                    stuck = Some(Error::NotInSpan(format!("residual did not drop below degree {n} after peeling")));
                    break 'layers;
                }
            }
        }
        n += 1;
    }
    let constant = if all_equal(&residual) {
        residual.first().cloned().unwrap_or(zero)
    } else {
        // Past degree g every layer is a 2-adic digit, and peeling may drift
        // toward a 2-adic solution that is not integral. Finish exactly.
        let (extra, q) = complete_exactly(g, &residual, generators).ok_or_else(|| {
            stuck.take().unwrap_or_else(|| {
                Error::ResidualNonConstant(format!(
                    "residual past degree {} is not a W(k0)-combination of generators plus a constant",
                    n0 + margin
                ))
            })
        })?;
        for (c, e) in coeffs.iter_mut().zip(extra) {
            *c = c.add(&e)?;
        }
        q
    };
    let decomposition = Decomposition { coefficients: coeffs, constant, residual_ok: false };
    let reproduced = decomposition.reproduce(generators)?;
    let mut ok = true;
    for (a, b) in reproduced.iter().zip(&target.values) {
        ok &= witt_eq(a, b)?;
    }
    Ok(Decomposition { residual_ok: ok, ..decomposition })
}

/// Generator tables `lift(u_{d-r}) lift(v_r)` in declared degree `d`, for
/// `max(0, 2d - n) <= r <= d <= n`, on `B_n` samples.
pub fn bn_generator_tables(samples: &[MultiquadraticTorsor], n: usize) -> Result<Vec<EvaluationTable>> {
    let mut per_sample = Vec::with_capacity(samples.len());
    for t in samples {
        let u: Vec<WittClass> = (0..=n).map(|j| lift_u(t, j)).collect::<Result<_>>()?;
        let v = lift_v_upto(t, n)?;
        per_sample.push((u, v));
    }
    let mut out = Vec::new();
    for d in 0..=n {
        for r in (2 * d).saturating_sub(n)..=d {
            let values = per_sample.iter().map(|(u, v)| u[d - r].mul(&v[r])).collect::<Result<Vec<_>>>()?;
            out.push(EvaluationTable::new(samples.to_vec(), values, d)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::e_map;
    use crate::witt::PfisterPresentation;
    use FieldDescriptor::Formal;

    #[test]
    fn extract_pfister() {
        let f = Formal(2);
        let (t1, t2) = (f.t(1).unwrap(), f.t(2).unwrap());
        let p = pfister(f, &[t1.clone(), t2.clone()]).unwrap();
        let e = e_extract(&p, 2).unwrap();
        assert_eq!(e, symbol_normalize(&f, &[t1.clone(), t2.clone()]).unwrap());
        let s = pfister(f, &[t1.clone()]).unwrap().add(&pfister(f, &[t2.clone()]).unwrap()).unwrap();
        let e1 = e_extract(&s, 1).unwrap();
        assert_eq!(e1, CohClass::linear(&t1).add(&CohClass::linear(&t2)).unwrap());
        assert!(e_extract(&WittClass::zero(f), 3).unwrap().is_syntactic_zero());
        assert!(matches!(e_extract(&WittClass::one(f), 1), Err(Error::NotInIdealPower(_))));
    }

    #[test]
    fn extract_matches_e_map_on_mixed_signs() {
        let f = Formal(3);
        let gens = vec![f.formal_class(true, &[1, 3]).unwrap(), f.formal_class(true, &[]).unwrap()];
        let p = PfisterPresentation::new(f, 2, vec![(BigInt::from(1), gens)]).unwrap();
        assert_eq!(e_extract(&p.to_witt().unwrap(), 2).unwrap(), e_map(&p).unwrap());
    }

    #[test]
    fn f2_solver_prefers_early_columns() {
        let cols = vec![vec![true, false], vec![true, false], vec![false, true]];
        let (x, k) = solve_f2(&cols, &[true, true]).unwrap();
        assert_eq!(x, vec![true, false, true]);
        assert_eq!(k, vec![vec![true, true, false]]);
        assert!(solve_f2(&cols[..1], &[false, true]).is_none());
    }
}
