//! Residue maps onto the finite residue fields and a Chinese remainder
//! solver with small-height multipliers. Inversions happen only in the
//! residue fields, never in K.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{val_p, AlgElem, Int, NumberField, Rat};
use crate::error::{Error, Result};
use crate::ffield::FFElem;
use crate::ideal::multipliers;
use crate::montes::{montes_factorize, PrimeIdeal};
use crate::omtype::{index_of_coincidence, pow_int};
use crate::valuation::{ascend, vp, Stop};

/// One congruence alpha = target (mod P^exponent).
#[derive(Clone, Debug)]
pub struct ResidueTarget {
    pub p: Int,
    pub label: usize,
    pub exponent: i64,
    pub target: AlgElem,
}

/// The residue of a P-integral element in the residue field F_P (the top
/// level of the prime's tower). Errors when the element is not P-integral.
pub fn reduce(pr: &mut PrimeIdeal, alpha: &AlgElem) -> Result<FFElem> {
    let top = pr.om.tower.height();
    if alpha.is_zero() {
        return Ok(pr.om.tower.zero(top));
    }
    let nu = val_p(&alpha.scalar, &pr.om.p)?;
    let (stop, _) = ascend(pr, &alpha.num)?;
    let top = pr.om.tower.height();
    let vg = match stop {
        Stop::LevelZero => Rat::zero(),
        Stop::AtLevel { i, v_next } => {
            Rat::new(Int::from(v_next), Int::from(pr.om.e_prod_up_to(i)))
        }
    };
    let total = vg.clone() + Rat::from_integer(Int::from(nu));
    if total.is_negative() {
        return Err(Error::NotIntegral);
    }
    if total.is_positive() {
        return Ok(pr.om.tower.zero(top));
    }
    // total = 0: residue = lred(a/b) * residue of p^nu * g(theta)
    let scalar_unit = alpha.scalar.clone() / power_rat(&pr.om.p, nu);
    let a_res = int_residue(&pr.om, scalar_unit.numer());
    let b_res = int_residue(&pr.om, scalar_unit.denom());
    let tower = &pr.om.tower;
    let unit = tower.mul(top, &a_res, &tower.inv(top, &b_res));
    let g_res = match stop {
        Stop::LevelZero => {
            debug_assert_eq!(nu, 0);
            let r = pr.om.tower.eval_at_gen1(&alpha.num);
            pr.om.tower.embed(&r, 1, top)
        }
        Stop::AtLevel { i, v_next } => {
            // N = -nu; lred(g/p^N) = R_i(g)(z_i) * z1^t1 ... zi^ti from the
            // gamma decomposition of p^-N Phi_i^s pi_i^u
            let n_exp = -nu;
            let lvl = pr.om.level(i);
            let ld = pr.om.level_data(i);
            let rp = pr.om.residual_with(&ld, &alpha.num, lvl.h, lvl.e, None);
            let zl = pr.om.z_field_level(i);
            let z = pr.om.z_elem(i);
            let rval = pr.om.tower.poly_eval(&rp, zl, &z);
            let rval = pr.om.tower.embed(&rval, zl, top);
            let s_can_ucan = {
                let e = lvl.e;
                let h = lvl.h;
                let s = if e == 1 {
                    0
                } else {
                    let hi = crate::omtype::modinv(h, e);
                    ((v_next.rem_euclid(e)) as i128 * hi as i128).rem_euclid(e as i128) as i64
                };
                (s, (v_next - s * h) / e)
            };
            let (s_can, u_can) = s_can_ucan;
            let mut vec = vec![0i64; i + 1];
            vec[0] = -n_exp;
            for (d, c) in vec.iter_mut().zip(lvl.log_phi.iter()) {
                *d += s_can * c;
            }
            for (d, c) in vec.iter_mut().zip(lvl.log_pi.iter()) {
                *d += u_can * c;
            }
            let ts = pr.om.gamma_decompose(i, &vec)?;
            let tw = pr.om.z_power_product(&ts, top);
            pr.om.tower.mul(top, &rval, &tw)
        }
    };
    Ok(tower.mul(top, &unit, &g_res))
}

fn power_rat(p: &Int, e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(p.pow(e as u32))
    } else {
        Rat::new(Int::one(), p.pow((-e) as u32))
    }
}

fn int_residue(om: &crate::omtype::OMType, n: &Int) -> FFElem {
    let top = om.tower.height();
    let r = n.mod_floor(&om.p);
    om.tower.scalar(top, r.to_u64().expect("residue fits"))
}

/// Multipliers c_P with c_P = 1 mod P^{a_P} and c_P = 0 mod Q^{a_Q} for all
/// other primes Q over p. Small height: built from the class multipliers,
/// one residue-field inversion at level one and one prescribed-residue
/// polynomial.
pub fn crt_idempotents(primes: &mut Vec<PrimeIdeal>, exps: &[i64]) -> Result<Vec<AlgElem>> {
    let n = primes.len();
    assert_eq!(exps.len(), n);
    assert!(exps.iter().all(|&a| a >= 1));
    let nf = primes[0].nf.clone();
    let p = primes[0].om.p.clone();
    if n == 1 {
        return Ok(vec![nf.one_elem()]);
    }
    // per-prime margin M from the deepest coincidence with the others
    let mut ms = vec![0i64; n];
    let mut imaxes = vec![0usize; n];
    for idx in 0..n {
        let mut imax = 0usize;
        for q in 0..n {
            if q != idx {
                imax = imax.max(index_of_coincidence(&primes[idx].om, &primes[q].om));
            }
        }
        imaxes[idx] = imax;
        ms[idx] = if imax == 0 {
            0
        } else {
            let v = primes[idx].om.level(imax + 1).v_phi;
            let den = primes[idx].om.e_prod_up_to(imax);
            // ceil(v / den)
            (v + den - 1).div_euclid(den)
        };
    }
    let bs = multipliers(primes, exps, &ms)?;
    let mut out = Vec::with_capacity(n);
    for idx in 0..n {
        let keys: Vec<Vec<u64>> = primes.iter().map(|q| q.om.tower.flatten_poly(q.om.psi0())).collect();
        let my_key = keys[idx].clone();
        let companions: Vec<usize> = (0..n).filter(|&q| q != idx && keys[q] == my_key).collect();
        // invert the class part at level one
        let b = &bs[idx];
        // b = (B^m * prod phi_l^{d_l}) / p^N; split the residue computation:
        // zeta = class of the p-unit prefactor modulo (p, phi_1) comes from
        // the full numerator with its companion part divided back out at the
        // residue level, which is exactly red(b) * xi^-1; computing zeta
        // directly from B^m is cheaper and avoids the split:
        // reconstruct h(x) = B^m via the stored first approximations.
        let top = primes[idx].om.tower.height();
        let tower = primes[idx].om.tower.clone();
        let (zeta, xi) = {
            if companions.is_empty() {
                // b is the pure class product: red(b) = zeta in F_1
                let mut c = primes[idx].clone();
                let z = reduce(&mut c, b)?;
                *primes.get_mut(idx).unwrap() = c;
                (z, tower.one(top))
            } else {
                // g = p^-N prod phi_l^{d_l}; xi = red(g); zeta = red(b)/xi
                let mut g = nf.one_elem();
                for &l in &companions {
                    // reconstruct d_l from the multiplier shape: v_P(phi_l)/e
                    let rl1 = primes[l].om.levels.len();
                    let cv = crate::valuation::cross_value(&primes[idx], &primes[l], rl1)?;
                    let dl = cv.denom().to_i64().unwrap();
                    let nl = cv.numer().to_i64().unwrap();
                    let phil = nf.elem_from_poly(primes[l].phi_p().clone());
                    g = nf.mul(&g, &nf.pow(&phil, dl as u64));
                    g = nf.mul_rat(&g, &Rat::new(Int::one(), pow_int(&p, nl)));
                }
                let mut c = primes[idx].clone();
                let xi = reduce(&mut c, &g)?;
                let zb = reduce(&mut c, b)?;
                *primes.get_mut(idx).unwrap() = c;
                let zeta = tower.mul(top, &zb, &tower.inv(top, &xi));
                (zeta, xi)
            }
        };
        if tower.is_zero_elem(&zeta) {
            return Err(Error::Internal("class multiplier reduces to zero".into()));
        }
        // zeta lives in F_1; lift its inverse
        let zeta1 = tower.project(&zeta, top, 1).map_err(|_| {
            Error::Internal("class residue does not lie in the level-one field".into())
        })?;
        let zinv = tower.inv(1, &zeta1);
        let beta0 = nf.elem_from_poly(tower.lift_elem1(&zinv));
        let mut c_p = nf.mul(b, &beta0);
        if !companions.is_empty() {
            let i = imaxes[idx];
            let m_val = ms[idx];
            let lvl = primes[idx].om.level(i);
            let v_target = primes[idx].om.e_prod_up_to(i) * m_val;
            // phi(y) with phi(z_i) = z_i^(ell_i V / e_i) * (xi xi')^-1
            let mut vec = vec![0i64; i + 1];
            vec[0] = -m_val;
            let log_pi_next = primes[idx].om.level(i + 1).log_pi.clone();
            for (d, cc) in vec.iter_mut().zip(log_pi_next.iter()) {
                *d += v_target * cc;
            }
            let ts = primes[idx].om.gamma_decompose(i, &vec)?;
            let xi_p = primes[idx].om.z_power_product(&ts, top);
            let ell_i = lvl.ell;
            let e_i = lvl.e;
            debug_assert_eq!((ell_i * v_target) % e_i, 0);
            let zpow = primes[idx]
                .om
                .tower
                .pow_i64(top, &primes[idx].om.tower.embed(
                    &primes[idx].om.z_elem(i),
                    primes[idx].om.z_field_level(i),
                    top,
                ), ell_i * v_target / e_i);
            let prod = tower.mul(top, &xi, &xi_p);
            let target = tower.mul(top, &zpow, &tower.inv(top, &prod));
            let target_i1 = tower.project(&target, top, i + 1).map_err(|_| {
                Error::Internal("prescribed residue does not lie in the expected field".into())
            })?;
            let want = tower.poly_new(i, tower.coords(&target_i1).to_vec());
            let p_poly = primes[idx].om.build_on_side(i, v_target, &want)?;
            let p_el = nf.elem(
                Rat::new(Int::one(), pow_int(&p, m_val)),
                p_poly,
            );
            c_p = nf.mul(&c_p, &p_el);
        }
        // raise to the requested exponent at P
        if exps[idx] > 1 {
            let cm1 = nf.sub(&c_p, &nf.one_elem());
            let v = if cm1.is_zero() {
                i64::MAX
            } else {
                let mut c = primes[idx].clone();
                let v = vp(&mut c, &cm1)?;
                *primes.get_mut(idx).unwrap() = c;
                v
            };
            if v < exps[idx] {
                // least odd m with m*v >= a
                let mut mm = (exps[idx] + v - 1) / v;
                if mm % 2 == 0 {
                    mm += 1;
                }
                c_p = nf.add(&nf.pow(&cm1, mm as u64), &nf.one_elem());
            }
        }
        out.push(c_p);
    }
    Ok(out)
}

fn int_modinv(a: &Int, m: &Int) -> Int {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Solve a system of congruences alpha = target_i (mod P_i^{a_i}) across
/// possibly several rational primes.
pub fn crt_solve(nf: &Arc<NumberField>, targets: &[ResidueTarget]) -> Result<AlgElem> {
    if targets.is_empty() {
        return Ok(nf.zero_elem());
    }
    // group by rational prime
    let mut ps: Vec<Int> = targets.iter().map(|t| t.p.clone()).collect();
    ps.sort();
    ps.dedup();
    for t in targets {
        if targets
            .iter()
            .filter(|u| u.p == t.p && u.label == t.label)
            .count()
            > 1
        {
            return Err(Error::DuplicateCrtTarget);
        }
    }
    struct Solved {
        p: Int,
        alpha: AlgElem,
        bound: i64, // max over listed primes of ceil(a_P / e_P)
    }
    let mut parts: Vec<Solved> = Vec::new();
    for p in &ps {
        let d = montes_factorize(nf, p)?;
        let mut primes = d.primes;
        let mut exps = vec![1i64; primes.len()];
        let mut wanted: Vec<Option<&ResidueTarget>> = vec![None; primes.len()];
        for t in targets.iter().filter(|t| &t.p == p) {
            let idx = primes
                .iter()
                .position(|pr| pr.label == t.label)
                .ok_or_else(|| Error::InvalidInput(format!("no prime labeled {} over {}", t.label, p)))?;
            exps[idx] = t.exponent;
            wanted[idx] = Some(t);
        }
        let cs = crt_idempotents(&mut primes, &exps)?;
        let mut alpha = nf.zero_elem();
        let mut bound = 1i64;
        for (idx, t) in wanted.iter().enumerate() {
            if let Some(t) = t {
                alpha = nf.add(&alpha, &nf.mul(&cs[idx], &t.target));
                let e = primes[idx].e;
                bound = bound.max((t.exponent + e - 1) / e);
            }
        }
        parts.push(Solved { p: p.clone(), alpha, bound });
    }
    if parts.len() == 1 {
        return Ok(parts.pop().expect("nonempty").alpha);
    }
    // integer weights w_p = 1 mod p^{B_p}, = 0 mod q^{B_q}; the bounds absorb
    // denominators the other parts carry at p
    let mut bounds: Vec<i64> = Vec::with_capacity(parts.len());
    for (i, s) in parts.iter().enumerate() {
        let mut b = s.bound;
        for (j, o) in parts.iter().enumerate() {
            if i != j {
                let den = o.alpha.scalar.denom().clone();
                if !den.is_one() && !den.is_zero() {
                    b += crate::arith::int_val_p(&den, &s.p);
                }
            }
        }
        bounds.push(b + 1);
    }
    let moduli: Vec<Int> = parts
        .iter()
        .zip(bounds.iter())
        .map(|(s, &b)| pow_int(&s.p, b))
        .collect();
    let big: Int = moduli.iter().product();
    let mut alpha = nf.zero_elem();
    for (i, s) in parts.iter().enumerate() {
        let rest = &big / &moduli[i];
        let w = (&rest * int_modinv(&rest, &moduli[i])).mod_floor(&big);
        alpha = nf.add(&alpha, &nf.mul_rat(&s.alpha, &Rat::from_integer(w)));
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::montes::montes_factorize;

    fn field(cs: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new(IntPoly::from_i64(cs)).unwrap())
    }

    #[test]
    fn reduce_integers() {
        let nf = field(&[2, 0, 1]);
        let d = montes_factorize(&nf, &Int::from(5)).unwrap();
        let mut pr = d.primes[0].clone();
        let tower = pr.om.tower.clone();
        let top = tower.height();
        // a * b^-1 in the prime subfield
        let a = nf.elem_from_rat(Rat::new(Int::from(3), Int::from(4)));
        let r = reduce(&mut pr, &a).unwrap();
        let want = tower.mul(top, &tower.scalar(top, 3), &tower.inv(top, &tower.scalar(top, 4)));
        assert_eq!(r, want);
        // kernel: reduce(alpha) = 0 iff v >= 1
        let five = nf.elem_from_int(5);
        assert!(tower.is_zero_elem(&reduce(&mut pr, &five).unwrap()));
        let inv5 = nf.elem_from_rat(Rat::new(Int::one(), Int::from(5)));
        assert!(reduce(&mut pr, &inv5).is_err());
    }

    #[test]
    fn reduce_is_ring_homomorphism() {
        let nf = field(&[3, 1, 0, 0, 1]);
        for p in [2i64, 3, 5] {
            let d = montes_factorize(&nf, &Int::from(p)).unwrap();
            for pr0 in &d.primes {
                let mut pr = pr0.clone();
                let tower = pr.om.tower.clone();
                let top = tower.height();
                let th = nf.theta();
                let xs = [
                    nf.add(&th, &nf.elem_from_int(1)),
                    nf.mul(&th, &th),
                    nf.add(&nf.mul(&th, &th), &nf.elem_from_int(p - 1)),
                    nf.elem_from_int(7),
                ];
                for a in &xs {
                    for b in &xs {
                        let ra = reduce(&mut pr, a).unwrap();
                        let rb = reduce(&mut pr, b).unwrap();
                        let rsum = reduce(&mut pr, &nf.add(a, b)).unwrap();
                        let rprod = reduce(&mut pr, &nf.mul(a, b)).unwrap();
                        assert_eq!(rsum, tower.add(top, &ra, &rb));
                        assert_eq!(rprod, tower.mul(top, &ra, &rb));
                    }
                    // kernel test
                    let ra = reduce(&mut pr, a).unwrap();
                    let mut c = pr.clone();
                    let v = vp(&mut c, a).unwrap();
                    assert_eq!(tower.is_zero_elem(&ra), v >= 1);
                }
            }
        }
    }

    #[test]
    fn idempotents_two_primes() {
        let nf = field(&[1, 0, 1]);
        let d = montes_factorize(&nf, &Int::from(5)).unwrap();
        let mut primes = d.primes.clone();
        let cs = crt_idempotents(&mut primes, &[1, 1]).unwrap();
        for (i, c) in cs.iter().enumerate() {
            for (q, pr) in primes.clone().iter().enumerate() {
                let mut prc = pr.clone();
                if q == i {
                    let r = reduce(&mut prc, c).unwrap();
                    assert_eq!(r, prc.om.tower.one(prc.om.tower.height()));
                } else {
                    assert!(vp(&mut prc, c).unwrap() >= 1);
                }
            }
        }
    }

    #[test]
    fn idempotents_higher_exponents() {
        let nf = field(&[3, 1, 0, 0, 1]);
        let d = montes_factorize(&nf, &Int::from(3)).unwrap();
        if d.primes.len() < 2 {
            return;
        }
        let mut primes = d.primes.clone();
        let exps: Vec<i64> = (0..primes.len() as i64).map(|k| k + 1).collect();
        let cs = crt_idempotents(&mut primes, &exps).unwrap();
        for (i, c) in cs.iter().enumerate() {
            for q in 0..primes.len() {
                let mut prc = primes[q].clone();
                if q == i {
                    let diff = nf.sub(c, &nf.one_elem());
                    if !diff.is_zero() {
                        assert!(vp(&mut prc, &diff).unwrap() >= exps[i]);
                    }
                } else {
                    assert!(vp(&mut prc, c).unwrap() >= exps[q]);
                }
            }
        }
    }

    #[test]
    fn solve_across_two_rational_primes() {
        let nf = field(&[-2, 0, 0, 1]); // x^3 - 2
        let d2 = montes_factorize(&nf, &Int::from(2)).unwrap();
        let d5 = montes_factorize(&nf, &Int::from(5)).unwrap();
        let th = nf.theta();
        let mut targets = vec![ResidueTarget {
            p: Int::from(2),
            label: d2.primes[0].label,
            exponent: 2,
            target: nf.add(&th, &nf.elem_from_int(1)),
        }];
        for pr in &d5.primes {
            targets.push(ResidueTarget {
                p: Int::from(5),
                label: pr.label,
                exponent: 1 + (pr.label as i64 % 2),
                target: nf.elem_from_int(pr.label as i64),
            });
        }
        let alpha = crt_solve(&nf, &targets).unwrap();
        for t in &targets {
            let d = if t.p == Int::from(2) { &d2 } else { &d5 };
            let pr = d.primes.iter().find(|q| q.label == t.label).unwrap();
            let mut prc = pr.clone();
            let diff = nf.sub(&alpha, &t.target);
            if !diff.is_zero() {
                let v = vp(&mut prc, &diff).unwrap();
                assert!(v >= t.exponent, "v = {} < {}", v, t.exponent);
            }
        }
        // duplicate rejection
        let mut dup = targets.clone();
        dup.push(targets[0].clone());
        assert!(crt_solve(&nf, &dup).is_err());
    }
}
