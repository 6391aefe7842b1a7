//! The valuation engine: v_P on K*, level ascent with on-demand improvement
//! of the Montes approximation, values of the level polynomials at their own
//! prime, and cross-valuations at foreign primes.

use crate::arith::{val_p, AlgElem, IntPoly, Rat};
use crate::error::{Error, Result};
use crate::montes::PrimeIdeal;
use crate::omtype::{gc_phi, index_of_coincidence};
use num_bigint::BigInt as Int;

/// Result of a valuation with the work done to obtain it.
#[derive(Clone, Copy, Debug)]
pub struct ValuationResult {
    pub value: i64,
    pub levels_used: usize,
    pub improvements_performed: i64,
}

/// Where the level ascent stopped for a polynomial g:
/// - `LevelZero`: psi_0 does not divide R_0(g), so v(g(theta_P)) = 0;
/// - `AtLevel { i, v_next }`: the level-i residual is not divisible by
///   psi_i and v(g(theta_P)) = v_next / (e_1..e_i) exactly.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Stop {
    LevelZero,
    AtLevel { i: usize, v_next: i64 },
}

/// Run the ascent for a nonzero g not divisible by f. May improve the
/// terminal level of the prime.
pub(crate) fn ascend(pr: &mut PrimeIdeal, g: &IntPoly) -> Result<(Stop, i64)> {
    let om = &pr.om;
    if !om.tower.poly_rem(&om.res0_poly(g), om.psi0()).is_zero() {
        return Ok((Stop::LevelZero, 0));
    }
    let top = pr.om.levels.len();
    for i in 1..=top {
        let (v_next, divides) = level_test(pr, i, g);
        if !divides {
            return Ok((Stop::AtLevel { i, v_next }, 0));
        }
    }
    // the terminal residual still divides: improve until it separates
    let mut improvements = 0i64;
    loop {
        improvements += 1;
        if improvements > 64 {
            return Err(Error::Internal("valuation ascent did not separate".into()));
        }
        let target = pr.terminal().h.saturating_mul(2).max(pr.terminal().h + 1);
        pr.improve_to(target)?;
        let i = pr.om.levels.len();
        let (v_next, divides) = level_test(pr, i, g);
        if !divides {
            return Ok((Stop::AtLevel { i, v_next }, improvements));
        }
    }
}

/// Compute (v_{i+1}(g), psi_i | R_i(g)) at a stored level in one pass.
fn level_test(pr: &PrimeIdeal, i: usize, g: &IntPoly) -> (i64, bool) {
    let om = &pr.om;
    let ld = om.level_data(i);
    let lvl = om.level(i);
    let (coeffs, pts) = om.cloud(&ld, g, None);
    let rp = om.residual_from_cloud(&ld, &coeffs, &pts, lvl.h, lvl.e);
    let touch = crate::polygon::first_touch(&pts, lvl.h, lvl.e).expect("nonempty cloud");
    let divides = if rp.is_zero() {
        true
    } else {
        om.tower.poly_rem(&rp, &lvl.psi).is_zero()
    };
    (touch.h_num, divides)
}

/// The exact P-adic valuation of a nonzero element of K.
pub fn vp(pr: &mut PrimeIdeal, alpha: &AlgElem) -> Result<i64> {
    Ok(vp_full(pr, alpha)?.value)
}

pub fn vp_full(pr: &mut PrimeIdeal, alpha: &AlgElem) -> Result<ValuationResult> {
    if alpha.is_zero() {
        return Err(Error::ZeroInField);
    }
    if alpha.num.divisible_by_monic(pr.nf.poly()) {
        return Err(Error::ZeroInField);
    }
    let nu = val_p(&alpha.scalar, &pr.om.p)?;
    let (stop, imp) = ascend(pr, &alpha.num)?;
    let e_abs = pr.e;
    let (value, levels_used) = match stop {
        Stop::LevelZero => (e_abs * nu, 0),
        Stop::AtLevel { i, v_next } => {
            // e_abs * v_next / (e_1..e_i) is an integer: the tail product of
            // the e_k divides it
            let den = pr.om.e_prod_up_to(i);
            let num = e_abs
                .checked_mul(v_next)
                .expect("valuation overflow");
            debug_assert_eq!(num % den, 0);
            (num / den + e_abs * nu, i)
        }
    };
    Ok(ValuationResult { value, levels_used, improvements_performed: imp })
}

/// v(phi_i(theta_P)) = (v_i(phi_i) + h_i/e_i) / (e_1..e_{i-1}), exact.
pub fn value_of_phi(pr: &PrimeIdeal, i: usize) -> Rat {
    let lvl = pr.om.level(i);
    let den = pr.om.e_prod_up_to(i - 1);
    (Rat::from_integer(Int::from(lvl.v_phi)) + Rat::new(Int::from(lvl.h), Int::from(lvl.e)))
        / Rat::from_integer(Int::from(den))
}

/// v_P(phi_{i,Q}(theta)) / e(P/p) for distinct primes P, Q over the same p,
/// from the shared invariants and the hidden slopes; never touches theta.
pub fn cross_value(pr: &PrimeIdeal, qr: &PrimeIdeal, i: usize) -> Result<Rat> {
    if pr.om.p != qr.om.p {
        return Err(Error::InvalidInput("cross_value needs a common p".into()));
    }
    if pr.om.sort_key() == qr.om.sort_key() {
        return Err(Error::InvalidInput("cross_value of a prime with itself".into()));
    }
    let j = index_of_coincidence(&pr.om, &qr.om);
    if j == 0 {
        return Ok(Rat::from_integer(Int::from(0)));
    }
    if i < j {
        // shared level: the own-value formula
        return Ok(value_of_phi(qr, i));
    }
    let (phi_pq, hid_p, hid_q) = gc_phi(&pr.om, &qr.om);
    let lvl_j = pr.om.level(j);
    let den = pr.om.e_prod_up_to(j - 1);
    let vj = Rat::from_integer(Int::from(lvl_j.v_phi));
    let slope = |s: (i64, i64)| Rat::new(Int::from(s.0), Int::from(s.1));
    let min_hidden = {
        let a = slope(hid_p);
        let b = slope(hid_q);
        if a <= b {
            a
        } else {
            b
        }
    };
    let base = if i == j {
        if qr.om.level(j).phi == phi_pq {
            (vj + slope(hid_p)) / Rat::from_integer(Int::from(den))
        } else {
            (vj + min_hidden) / Rat::from_integer(Int::from(den))
        }
    } else {
        // i > j: scaled by the degree ratio
        let ratio = Rat::new(Int::from(qr.om.level(i).m as u64), Int::from(lvl_j.m as u64));
        ratio * (vj + min_hidden) / Rat::from_integer(Int::from(den))
    };
    Ok(base)
}
