//! The Montes algorithm: from (f, p) produce the f-complete optimal types in
//! one-to-one correspondence with the primes over p, attach the terminal
//! level carrying the Montes approximation, and improve approximations on
//! demand by refinement steps at the terminal level.

use std::sync::Arc;

use crate::arith::{phi_expansion, Int, IntPoly, NumberField};
use crate::error::{Error, Result};
use crate::ffield::{FFPoly, TowerField};
use crate::intfactor::prime_to_u64;
use crate::omtype::{pow_int, LevelData, OMType};
use crate::polygon::{self, PlanePoint, Side};

/// A prime ideal over p in Okutsu-Montes representation: an f-complete type
/// whose last level is the terminal one (e = f = 1) carrying the Montes
/// approximation phi_p.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub om: OMType,
    pub nf: Arc<NumberField>,
    /// canonical 1-based ordinal within its decomposition
    pub label: usize,
    pub e: i64,
    pub f: i64,
}

impl PrimeIdeal {
    /// Order r of the underlying f-complete type (terminal level excluded).
    pub fn order(&self) -> usize {
        self.om.levels.len() - 1
    }

    pub fn terminal(&self) -> &crate::omtype::Level {
        self.om.levels.last().expect("terminal level")
    }

    /// The Montes approximation to the p-adic factor.
    pub fn phi_p(&self) -> &IntPoly {
        &self.terminal().phi
    }

    /// Degree of the p-adic factor singled out by this prime.
    pub fn local_degree(&self) -> usize {
        self.terminal().m
    }

    /// Okutsu depth: r when e_r f_r > 1, else r - 1.
    pub fn depth(&self) -> usize {
        let r = self.order();
        if r == 0 {
            return 0;
        }
        let lr = self.om.level(r);
        if lr.e * lr.f as i64 > 1 {
            r
        } else {
            r - 1
        }
    }

    /// The frame [phi_1..phi_R] of the first `depth` level polynomials.
    pub fn okutsu_frame(&self) -> (Vec<IntPoly>, usize) {
        let depth = self.depth();
        let frame = (1..=depth).map(|i| self.om.level(i).phi.clone()).collect();
        (frame, depth)
    }

    /// nu_p = sum h_i / (e_1..e_i) over the non-terminal levels, as an exact
    /// rational (numerator, denominator).
    pub fn nu_p(&self) -> crate::arith::Rat {
        use crate::arith::Rat;
        let r = self.order();
        let mut acc = Rat::from_integer(Int::from(0));
        let mut eprod = 1i64;
        for i in 1..=r {
            let lv = self.om.level(i);
            eprod *= lv.e;
            acc += Rat::new(Int::from(lv.h), Int::from(eprod));
        }
        acc
    }

    /// Raise the terminal slope to at least `target_h` by refinement steps.
    /// Levels 1..r and the label stay untouched.
    pub fn improve_to(&mut self, target_h: i64) -> Result<()> {
        let f = self.nf.poly().clone();
        let mut guard = 0usize;
        while self.terminal().h < target_h {
            guard += 1;
            if guard > 100_000 {
                return Err(Error::Internal("terminal refinement did not converge".into()));
            }
            let old_h = self.terminal().h;
            let i = self.om.levels.len();
            let (rep, v_phi) = {
                let term = self.om.level(i);
                let ld = LevelData { i, phi: &term.phi, v_phi: term.v_phi };
                let rep = self.om.representative_for(&ld, term.h, 1, &term.psi)?;
                (rep, term.v_phi)
            };
            let e_abs = self.e;
            let rep = if rep == f {
                // exact factor: step straight to the requested quality
                let kappa = (target_h + v_phi) / e_abs + 1;
                f.add(&IntPoly::constant(pow_int(&self.om.p, kappa)))
            } else {
                rep
            };
            self.om.pop_terminal_level();
            attach_terminal(&mut self.om, &f, rep, v_phi)?;
            if self.terminal().h <= old_h {
                return Err(Error::Internal("terminal slope failed to increase".into()));
            }
        }
        Ok(())
    }

    /// A copy improved to the requested terminal slope; the original is left
    /// untouched.
    pub fn improved(&self, target_h: i64) -> Result<PrimeIdeal> {
        let mut c = self.clone();
        c.improve_to(target_h)?;
        Ok(c)
    }
}

/// The prime ideal decomposition of p in the field.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub nf: Arc<NumberField>,
    pub p: Int,
    pub primes: Vec<PrimeIdeal>,
}

impl Decomposition {
    pub fn find_label(&self, label: usize) -> Option<&PrimeIdeal> {
        self.primes.iter().find(|q| q.label == label)
    }
}

struct WorkItem {
    om: OMType,
    phi: IntPoly,
    v_phi: i64,
    omega: usize,
    /// only sides strictly steeper than this slope (h, e) are considered
    slope_filter: Option<(i64, i64)>,
    pending_refs: Vec<(IntPoly, (i64, i64))>,
}

/// Decompose p in the number field: the list of primes over p with canonical
/// labels.
pub fn montes_factorize(nf: &Arc<NumberField>, p: &Int) -> Result<Decomposition> {
    let pu = prime_to_u64(p)?;
    let f = nf.poly().clone();
    let t0 = TowerField::new(pu);
    let fbar = t0.reduce_int_poly(&f);
    let factors = t0.factor(&fbar)?;
    let mut complete: Vec<OMType> = Vec::new();
    let mut stack: Vec<WorkItem> = Vec::new();
    for (psi0, mult) in factors {
        let tower = t0.extend_unchecked(&psi0);
        let om = OMType::new(p.clone(), pu, tower);
        let phi1 = om.tower.lift_poly0(&psi0);
        if mult == 1 {
            let mut om = om;
            attach_terminal_checked(&mut om, &f, phi1, 0)?;
            complete.push(om);
        } else {
            stack.push(WorkItem {
                om,
                phi: phi1,
                v_phi: 0,
                omega: mult as usize,
                slope_filter: None,
                pending_refs: vec![],
            });
        }
    }
    while let Some(item) = stack.pop() {
        process_item(&f, item, &mut stack, &mut complete)?;
    }
    // fundamental identity
    let total: i64 = complete
        .iter()
        .map(|om| om.e_abs() * om.f_abs())
        .sum();
    if total != nf.degree() as i64 {
        return Err(Error::Internal(format!(
            "degrees of the branches sum to {} instead of {}",
            total,
            nf.degree()
        )));
    }
    // canonical order and labels
    let mut keyed: Vec<(Vec<u8>, OMType)> = complete.into_iter().map(|om| (om.sort_key(), om)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let primes = keyed
        .into_iter()
        .enumerate()
        .map(|(k, (_, om))| PrimeIdeal {
            e: om.e_abs(),
            f: om.f_abs(),
            om,
            nf: nf.clone(),
            label: k + 1,
        })
        .collect();
    Ok(Decomposition { nf: nf.clone(), p: p.clone(), primes })
}

fn process_item(
    f: &IntPoly,
    item: WorkItem,
    stack: &mut Vec<WorkItem>,
    complete: &mut Vec<OMType>,
) -> Result<()> {
    let i = item.om.levels.len() + 1;
    let ld = LevelData { i, phi: &item.phi, v_phi: item.v_phi };
    let count = item.omega + 1;
    let (coeffs, quots) = phi_expansion(f, &item.phi, count)?;
    if coeffs[0].is_zero() {
        return Err(Error::Internal(
            "phi divides f exactly during branching; f must be irreducible over Q".into(),
        ));
    }
    let mut pts: Vec<PlanePoint> = Vec::new();
    for (s, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let v = item.om.v_level(i, a) + (s as i64) * item.v_phi;
        pts.push(PlanePoint { s: s as i64, u: v });
    }
    let np = polygon::lower_envelope(&pts)?;
    let mut sides: Vec<Side> = np
        .principal_part()
        .into_iter()
        .filter(|s| match item.slope_filter {
            // strictly steeper than the refined slope: h/e > hf/ef
            Some((hf, ef)) => (s.h as i128) * (ef as i128) > (hf as i128) * (s.e as i128),
            None => true,
        })
        .collect();
    if sides.is_empty() {
        return Err(Error::Internal("no usable side on the principal polygon".into()));
    }
    // process sides by increasing absolute slope
    sides.sort_by(|a, b| ((a.h as i128) * (b.e as i128)).cmp(&((b.h as i128) * (a.e as i128))));
    // gather branches first: the refinement bookkeeping needs the total count
    struct Branch {
        h: i64,
        e: i64,
        s_end: i64,
        u: i64,
        psi: FFPoly,
        mult: u32,
    }
    let mut branches: Vec<Branch> = Vec::new();
    for side in &sides {
        let rp = item.om.residual_from_cloud(&ld, &coeffs, &pts, side.h, side.e);
        let u = item.om.v_level(i, &coeffs[side.s1 as usize]);
        for (psi, mult) in item.om.tower.factor(&rp)? {
            // a pure y factor is an indexing artifact of the canonical
            // normalization, not a residual branch
            if psi.deg() == 1 && item.om.tower.is_zero_elem(&psi.coeffs[0]) {
                continue;
            }
            branches.push(Branch { h: side.h, e: side.e, s_end: side.s1, u, psi, mult });
        }
    }
    let total_pairs = branches.len();
    for br in branches {
        let quot: Vec<IntPoly> = std::iter::once(IntPoly::one())
            .chain((1..br.e).map(|j| quots[(br.s_end - j - 1) as usize].clone()))
            .collect();
        if br.mult == 1 {
            // f-complete: freeze the level and attach the terminal one
            let mut om = item.om.clone();
            om.push_enlarged_level(
                item.phi.clone(),
                item.v_phi,
                br.h,
                br.e,
                br.psi,
                br.u,
                br.s_end,
                quot,
                item.pending_refs.clone(),
            );
            let r = om.levels.len();
            let (rep, v_next) = {
                let ld_r = om.level_data(r);
                let lvl = om.level(r);
                let rep = om.representative_for(&ld_r, lvl.h, lvl.e, &lvl.psi)?;
                let v_next = (lvl.e * lvl.f as i64) * (lvl.e * lvl.v_phi + lvl.h);
                (rep, v_next)
            };
            attach_terminal_checked(&mut om, f, rep, v_next)?;
            complete.push(om);
            continue;
        }
        let rep = item.om.representative_for(&ld, br.h, br.e, &br.psi)?;
        let ef = br.e * br.psi.deg() as i64;
        if ef > 1 {
            let mut om = item.om.clone();
            om.push_enlarged_level(
                item.phi.clone(),
                item.v_phi,
                br.h,
                br.e,
                br.psi.clone(),
                br.u,
                br.s_end,
                quot,
                item.pending_refs.clone(),
            );
            let v_next = (br.e * br.psi.deg() as i64) * (br.e * item.v_phi + br.h);
            stack.push(WorkItem {
                om,
                phi: rep,
                v_phi: v_next,
                omega: br.mult as usize,
                slope_filter: None,
                pending_refs: vec![],
            });
        } else {
            // refinement step: same level, better representative, steeper sides
            let mut refs = item.pending_refs.clone();
            if total_pairs > 1 {
                refs.push((item.phi.clone(), (br.h, br.e)));
            }
            stack.push(WorkItem {
                om: item.om.clone(),
                phi: rep,
                v_phi: item.v_phi,
                omega: item.omega,
                slope_filter: Some((br.h, br.e)),
                pending_refs: refs,
            });
        }
    }
    Ok(())
}

/// Attach the terminal level for a representative `rep` of the complete
/// type, bumping rep away from f when they coincide (the p-adic factor is f
/// itself, so any sufficiently deep perturbation is a valid approximation).
fn attach_terminal_checked(om: &mut OMType, f: &IntPoly, rep: IntPoly, v_next: i64) -> Result<()> {
    let rep = if &rep == f {
        let e_abs: i64 = om.levels.iter().map(|l| l.e).product();
        let kappa = v_next / e_abs.max(1) + 2;
        f.add(&IntPoly::constant(pow_int(&om.p, kappa)))
    } else {
        rep
    };
    attach_terminal(om, f, rep, v_next)
}

/// Compute the terminal invariants of f with respect to the approximation
/// `rep` (slope, degree-one residual, root) and push them as the last level.
fn attach_terminal(om: &mut OMType, f: &IntPoly, rep: IntPoly, v_phi: i64) -> Result<()> {
    if f.rem_monic(&rep).is_zero() && &rep != f {
        // a strict divisor in Z[x] contradicts the documented input contract
        return Err(Error::Reducible);
    }
    let i = om.levels.len() + 1;
    let ld = LevelData { i, phi: &rep, v_phi };
    let (coeffs, pts) = om.cloud(&ld, f, None);
    let np = polygon::lower_envelope(&pts)?;
    let principal = np.principal_part();
    // sides come steepest first; by completeness the steepest has length one
    // and integer slope
    let side = principal
        .first()
        .ok_or_else(|| Error::Internal("terminal polygon has no negative side".into()))?;
    if side.e != 1 || side.degree() != 1 {
        return Err(Error::Internal(format!(
            "terminal side is not of length one (slope -{}/{}, degree {})",
            side.h,
            side.e,
            side.degree()
        )));
    }
    let h = side.h;
    let rp = om.residual_from_cloud(&ld, &coeffs, &pts, h, 1);
    if rp.degree() != Some(1) {
        return Err(Error::Internal("terminal residual is not of degree one".into()));
    }
    let psi = om.tower.poly_monic(&rp);
    if om.tower.is_zero_elem(&psi.coeffs[0]) {
        return Err(Error::Internal("terminal residual has root zero".into()));
    }
    let u = om.v_level(i, &coeffs[side.s1 as usize]);
    om.push_terminal_level(rep, v_phi, h, psi, u, side.s1, vec![IntPoly::one()]);
    Ok(())
}
