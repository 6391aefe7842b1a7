//! JSON output types for the CLI: deterministic field order, unbounded
//! integers as decimal strings, finite-field data as nested coefficient
//! arrays with least non-negative representatives.

use serde::Serialize;
use serde_json::Value;

use crate::arith::{AlgElem, Int, NumberField, Rat};
use crate::ffield::{FFElem, TowerField};
use crate::ideal::FracIdeal;
use crate::montes::{Decomposition, PrimeIdeal};
use crate::valuation::ValuationResult;

#[derive(Serialize)]
pub struct FieldOut {
    pub degree: usize,
    pub f: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub fn field_out(nf: &NumberField, label: Option<String>) -> FieldOut {
    FieldOut {
        degree: nf.degree(),
        f: nf.poly().coeffs().iter().map(|c| c.to_string()).collect(),
        label,
    }
}

#[derive(Serialize)]
pub struct ElemOut {
    pub num: Vec<String>,
    pub den: String,
}

pub fn elem_out(nf: &NumberField, a: &AlgElem) -> ElemOut {
    if a.is_zero() {
        return ElemOut { num: vec!["0".into()], den: "1".into() };
    }
    let b = a.scalar.denom().clone();
    let num = a.num.mul_scalar(a.scalar.numer());
    let mut coeffs: Vec<String> = num.coeffs().iter().map(|c| c.to_string()).collect();
    while coeffs.len() < nf.degree() {
        coeffs.push("0".into());
    }
    ElemOut { num: coeffs, den: b.to_string() }
}

pub fn rat_out(r: &Rat) -> Value {
    serde_json::json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
    })
}

/// Nested coefficient arrays for a tower element: base residues as decimal
/// strings, extensions as arrays over the previous level.
pub fn ff_out(t: &TowerField, a: &FFElem) -> Value {
    match a {
        FFElem::Base(x) => Value::String(x.to_string()),
        FFElem::Ext(v) => Value::Array(v.iter().map(|c| ff_out(t, c)).collect()),
    }
}

#[derive(Serialize)]
pub struct SlopeOut {
    pub h: String,
    pub e: String,
}

fn slope_out(h: i64, e: i64) -> SlopeOut {
    SlopeOut { h: h.to_string(), e: e.to_string() }
}

#[derive(Serialize)]
pub struct LevelOut {
    pub phi: Vec<String>,
    pub m: usize,
    pub v_phi: String,
    pub slope: SlopeOut,
    pub residual_degree: usize,
    pub psi: Value,
    pub u: String,
    pub s_end: String,
    pub log_phi: Vec<String>,
    pub log_pi: Vec<String>,
    pub log_gamma: Vec<String>,
    pub refinements: Vec<RefinementOut>,
}

#[derive(Serialize)]
pub struct RefinementOut {
    pub phi: Vec<String>,
    pub slope: SlopeOut,
}

#[derive(Serialize)]
pub struct TypeOut {
    pub psi0: Value,
    pub f0: usize,
    pub levels: Vec<LevelOut>,
}

pub fn type_out(pr: &PrimeIdeal) -> TypeOut {
    let om = &pr.om;
    let t = &om.tower;
    let poly_strings = |g: &crate::arith::IntPoly| -> Vec<String> {
        g.coeffs().iter().map(|c| c.to_string()).collect()
    };
    let ff_poly = |g: &crate::ffield::FFPoly| -> Value {
        Value::Array(g.coeffs.iter().map(|c| ff_out(t, c)).collect())
    };
    TypeOut {
        psi0: ff_poly(om.psi0()),
        f0: om.f0(),
        levels: om
            .levels
            .iter()
            .map(|lv| LevelOut {
                phi: poly_strings(&lv.phi),
                m: lv.m,
                v_phi: lv.v_phi.to_string(),
                slope: slope_out(lv.h, lv.e),
                residual_degree: lv.f,
                psi: ff_poly(&lv.psi),
                u: lv.u.to_string(),
                s_end: lv.s_end.to_string(),
                log_phi: lv.log_phi.iter().map(|x| x.to_string()).collect(),
                log_pi: lv.log_pi.iter().map(|x| x.to_string()).collect(),
                log_gamma: lv.log_gamma.iter().map(|x| x.to_string()).collect(),
                refinements: lv
                    .refinements
                    .iter()
                    .map(|(phi, (h, e))| RefinementOut { phi: poly_strings(phi), slope: slope_out(*h, *e) })
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct PrimeOut {
    pub label: String,
    pub e: String,
    pub f: String,
    pub depth: usize,
    pub frame_degrees: Vec<usize>,
    pub om_degrees: Vec<usize>,
    pub terminal_slope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub om: Option<TypeOut>,
}

#[derive(Serialize)]
pub struct DecompositionOut {
    pub field: FieldOut,
    pub p: String,
    pub primes: Vec<PrimeOut>,
}

pub fn decomposition_out(d: &Decomposition, label: Option<String>, with_types: bool) -> DecompositionOut {
    DecompositionOut {
        field: field_out(&d.nf, label),
        p: d.p.to_string(),
        primes: d
            .primes
            .iter()
            .map(|pr| {
                let (frame, depth) = pr.okutsu_frame();
                PrimeOut {
                    label: format!("p{}", pr.label),
                    e: pr.e.to_string(),
                    f: pr.f.to_string(),
                    depth,
                    frame_degrees: frame.iter().map(|g| g.deg()).collect(),
                    om_degrees: (1..=pr.om.levels.len()).map(|i| pr.om.level(i).m).collect(),
                    terminal_slope: format!("-{}", pr.terminal().h),
                    om: if with_types { Some(type_out(pr)) } else { None },
                }
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct IdealFactorOut {
    pub p: String,
    pub label: String,
    pub e: String,
    pub f: String,
    pub exponent: String,
}

#[derive(Serialize)]
pub struct IdealOut {
    pub field: FieldOut,
    pub factors: Vec<IdealFactorOut>,
}

pub fn ideal_out(a: &FracIdeal, label: Option<String>) -> IdealOut {
    let mut factors = vec![];
    for b in &a.blocks {
        for (pr, e) in b.support() {
            factors.push(IdealFactorOut {
                p: b.p.to_string(),
                label: format!("p{}", pr.label),
                e: pr.e.to_string(),
                f: pr.f.to_string(),
                exponent: e.to_string(),
            });
        }
    }
    IdealOut { field: field_out(&a.nf, label), factors }
}

#[derive(Serialize)]
pub struct ValuationOut {
    pub p: String,
    pub label: String,
    pub value: String,
    pub levels_used: usize,
    pub improvements_performed: String,
}

pub fn valuation_out(p: &Int, label: usize, v: &ValuationResult) -> ValuationOut {
    ValuationOut {
        p: p.to_string(),
        label: format!("p{}", label),
        value: v.value.to_string(),
        levels_used: v.levels_used,
        improvements_performed: v.improvements_performed.to_string(),
    }
}

#[derive(Serialize)]
pub struct GeneratorOut {
    pub p: String,
    pub label: String,
    pub element: ElemOut,
}

#[derive(Serialize)]
pub struct TwoElementOut {
    pub field: FieldOut,
    pub ell: Value,
    pub alpha: ElemOut,
}

#[derive(Serialize)]
pub struct ResidueOut {
    pub p: String,
    pub label: String,
    pub residue: Value,
    pub residue_field_degree: String,
}

#[derive(Serialize)]
pub struct BasisOut {
    pub field: FieldOut,
    pub p: String,
    pub elements: Vec<ElemOut>,
}

#[derive(Serialize)]
pub struct IndexOut {
    pub p: String,
    pub index: String,
}
