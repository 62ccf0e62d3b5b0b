//! Evaluation of the Weyl-group invariants on multiquadratic torsors.

use super::torsor::{twist, MultiquadraticTorsor, TargetGroup};
use crate::cohomology::{cup, sw_mod, sw_mod_lift, CohClass};
use crate::error::{Error, Result};
use crate::etale::trace_form;
use crate::witt::{DiagonalForm, WittClass};

fn require_bn(t: &MultiquadraticTorsor) -> Result<usize> {
    match t.target() {
        TargetGroup::Bn(n) => Ok(n),
        other => Err(Error::WrongTarget(format!("expected B_n, got {other}"))),
    }
}

fn require_dn(t: &MultiquadraticTorsor) -> Result<usize> {
    match t.target() {
        TargetGroup::Dn(n) => Ok(n),
        other => Err(Error::WrongTarget(format!("expected D_n, got {other}"))),
    }
}

/// Trace form of the degree-`n` algebra `K` (through `ρ`).
pub fn eval_a_k(t: &MultiquadraticTorsor) -> Result<DiagonalForm> {
    require_bn(t)?;
    trace_form(&twist(t, &t.natural_set()?)?)
}

/// Trace form of the degree-`2n` algebra `L` (through `ρ_2`).
pub fn eval_a_l(t: &MultiquadraticTorsor) -> Result<DiagonalForm> {
    require_bn(t)?;
    trace_form(&twist(t, &t.double_set()?)?)
}

/// Trace form of the degree-`n` algebra of an `S_n` torsor.
pub fn eval_sn_trace(t: &MultiquadraticTorsor) -> Result<DiagonalForm> {
    match t.target() {
        TargetGroup::Sn(_) => trace_form(&twist(t, &t.natural_set()?)?),
        other => Err(Error::WrongTarget(format!("expected S_n, got {other}"))),
    }
}

fn check_degree(d: usize, max: usize) -> Result<()> {
    if d > max {
        Err(Error::DegreeOutOfRange { degree: d, max })
    } else {
        Ok(())
    }
}

/// `u_d = sw~_d(a_K)`.
pub fn eval_u(t: &MultiquadraticTorsor, d: usize) -> Result<CohClass> {
    let n = require_bn(t)?;
    check_degree(d, n)?;
    sw_mod(&eval_a_k(t)?, d)
}

/// `v'_d = sw~_d(a_L)`, `0 <= d <= 2n`.
pub fn eval_v_prime(t: &MultiquadraticTorsor, d: usize) -> Result<CohClass> {
    let n = require_bn(t)?;
    check_degree(d, 2 * n)?;
    sw_mod(&eval_a_l(t)?, d)
}

/// All `v_0 .. v_d` from `v_d = v'_d + sum_{0 <= i < d} u_{d-i} v_i`.
pub fn eval_v_upto(t: &MultiquadraticTorsor, d: usize) -> Result<Vec<CohClass>> {
    let n = require_bn(t)?;
    check_degree(d, n)?;
    let ak = eval_a_k(t)?;
    let al = eval_a_l(t)?;
    let u: Vec<CohClass> = (0..=d).map(|j| sw_mod(&ak, j)).collect::<Result<_>>()?;
    let mut v: Vec<CohClass> = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut acc = sw_mod(&al, j)?;
        for (i, vi) in v.iter().enumerate() {
            acc = acc.add(&cup(&u[j - i], vi)?)?;
        }
        v.push(acc);
    }
    Ok(v)
}

/// `v_d`, `0 <= d <= n`.
pub fn eval_v(t: &MultiquadraticTorsor, d: usize) -> Result<CohClass> {
    Ok(eval_v_upto(t, d)?.pop().expect("nonempty"))
}

/// Witt lift of `u_d`: the recipe of `sw_mod_lift(n, d)` applied to `a_K`.
pub fn lift_u(t: &MultiquadraticTorsor, d: usize) -> Result<WittClass> {
    let n = require_bn(t)?;
    check_degree(d, n)?;
    sw_mod_lift(n, d)?.apply(&eval_a_k(t)?)
}

/// Witt lift of `v'_d` through `a_L`.
pub fn lift_v_prime(t: &MultiquadraticTorsor, d: usize) -> Result<WittClass> {
    let n = require_bn(t)?;
    check_degree(d, 2 * n)?;
    sw_mod_lift(2 * n, d)?.apply(&eval_a_l(t)?)
}

/// Witt lifts of `v_0 .. v_d` by the same recursion with products in `W`.
pub fn lift_v_upto(t: &MultiquadraticTorsor, d: usize) -> Result<Vec<WittClass>> {
    let n = require_bn(t)?;
    check_degree(d, n)?;
    let ak = eval_a_k(t)?;
    let al = eval_a_l(t)?;
    let u: Vec<WittClass> = (0..=d).map(|j| sw_mod_lift(n, j)?.apply(&ak)).collect::<Result<_>>()?;
    let mut v: Vec<WittClass> = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut acc = sw_mod_lift(2 * n, j)?.apply(&al)?;
        for (i, vi) in v.iter().enumerate() {
            acc = acc.add(&u[j - i].mul(vi)?)?;
        }
        v.push(acc);
    }
    Ok(v)
}

/// The trace-form invariant `r` on the `2^{n-1}` cosets of `S_n` in `W(D_n)`.
pub fn eval_r(t: &MultiquadraticTorsor) -> Result<DiagonalForm> {
    require_dn(t)?;
    trace_form(&twist(t, &t.coset_set()?)?)
}

/// `(a'_K, a'_L)`: the `B_n` trace forms through the inclusion `D_n ⊂ B_n`.
pub fn eval_dn_traces(t: &MultiquadraticTorsor) -> Result<(DiagonalForm, DiagonalForm)> {
    let n = require_dn(t)?;
    let b = t.retarget(TargetGroup::Bn(n))?;
    Ok((eval_a_k(&b)?, eval_a_l(&b)?))
}

/// `(<1>, a^(2), a^(3), a^(2) a^(3))` for a pair of `S_2`, `S_3` torsors.
pub fn eval_g2_basis(t2: &MultiquadraticTorsor, t3: &MultiquadraticTorsor) -> Result<[WittClass; 4]> {
    if t2.target() != TargetGroup::Sn(2) || t3.target() != TargetGroup::Sn(3) {
        return Err(Error::WrongTarget(format!("expected S2 and S3 torsors, got {} and {}", t2.target(), t3.target())));
    }
    t2.field().check_same(&t3.field())?;
    let a2 = WittClass::from_form(&eval_sn_trace(t2)?);
    let a3 = WittClass::from_form(&eval_sn_trace(t3)?);
    let prod = a2.mul(&a3)?;
    Ok([WittClass::one(t2.field()), a2, a3, prod])
}

/// [`eval_g2_basis`] on a torsor into `G_2` itself.
pub fn eval_g2(t: &MultiquadraticTorsor) -> Result<[WittClass; 4]> {
    let (t2, t3) = t.split_g2()?;
    eval_g2_basis(&t2, &t3)
}
