#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use versal::exprparse::{parse_expr, parse_param_poly};
use versal::{Chart, ChartSeries, GluingData, GluingPoly, OneCochain, ParamPoly, ZeroCochain};

pub fn coeff(rng: &mut ChaCha8Rng) -> String {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3..=3);
    }
    if rng.gen_bool(0.2) {
        format!("({c}/{})", rng.gen_range(2..=4))
    } else {
        format!("({c})")
    }
}

/// Polynomial in `x, y2` with y2-degree between 2 and `max_y`, total degree <= `max_total`.
pub fn laufer_f(rng: &mut ChaCha8Rng, max_y: u32, max_total: u32) -> String {
    let count = rng.gen_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..count {
        let j = rng.gen_range(2..=max_y.min(max_total));
        let i = rng.gen_range(0..=max_total - j);
        terms.push(format!("{}*x^{i}*y2^{j}", coeff(rng)));
    }
    terms.join(" + ")
}

/// Any polynomial in `x^{±1}, y1, y2` inside `I^2`.
pub fn general_poly(rng: &mut ChaCha8Rng) -> String {
    let count = rng.gen_range(0..=3);
    if count == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for _ in 0..count {
        let e1 = rng.gen_range(0..=2);
        let e2 = rng.gen_range(if e1 >= 2 { 0 } else { 2 - e1 }..=3);
        let x = rng.gen_range(-2..=2);
        terms.push(format!("{}*x^{x}*y1^{e1}*y2^{e2}", coeff(rng)));
    }
    terms.join(" + ")
}

pub fn laufer(m: i64, n: i64, f: &str) -> GluingData {
    GluingData::new(m, n, parse_expr(f).unwrap(), GluingPoly::zero(), GluingPoly::zero()).unwrap()
}

pub fn general(rng: &mut ChaCha8Rng, m: i64, n: i64) -> GluingData {
    GluingData::new(
        m,
        n,
        parse_expr(&general_poly(rng)).unwrap(),
        parse_expr(&general_poly(rng)).unwrap(),
        parse_expr(&general_poly(rng)).unwrap(),
    )
    .unwrap()
}

/// Random parameter polynomial with every term of degree in `min_deg..=max_deg`.
pub fn param_poly(rng: &mut ChaCha8Rng, arity: usize, min_deg: u32, max_deg: u32) -> ParamPoly {
    let count = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..count {
        let deg = rng.gen_range(min_deg..=max_deg);
        let mut factors = vec![coeff(rng)];
        for _ in 0..deg {
            factors.push(format!("a{}", rng.gen_range(0..arity)));
        }
        terms.push(factors.join("*"));
    }
    parse_param_poly(&terms.join(" + "), arity).unwrap()
}

pub fn series(rng: &mut ChaCha8Rng, chart: Chart, arity: usize, exps: &[i64], min_deg: u32) -> ChartSeries {
    let mut s = ChartSeries::zero(chart, arity);
    let k = rng.gen_range(0..=exps.len().min(3));
    for &e in exps.choose_multiple(rng, k) {
        s = &s + &ChartSeries::monomial(chart, e, param_poly(rng, arity, min_deg, 3));
    }
    s
}

pub fn zero_cochain(rng: &mut ChaCha8Rng, arity: usize, min_deg: u32, bound: Option<u32>) -> ZeroCochain {
    let hol = [0, 1, 2, 3, 4];
    ZeroCochain::new(
        [
            series(rng, Chart::X, arity, &hol, min_deg),
            series(rng, Chart::X, arity, &hol, min_deg),
        ],
        [
            series(rng, Chart::W, arity, &hol, min_deg),
            series(rng, Chart::W, arity, &hol, min_deg),
        ],
        bound,
    )
    .unwrap()
}

/// One-cochain on the overlap, exponents in `-range..=range`.
pub fn one_cochain(rng: &mut ChaCha8Rng, arity: usize, range: i64) -> OneCochain {
    let exps: Vec<i64> = (-range..=range).collect();
    OneCochain::new(
        [
            series(rng, Chart::W, arity, &exps, 0),
            series(rng, Chart::W, arity, &exps, 0),
        ],
        None,
    )
    .unwrap()
}
