//! SVG pictures of fans of free rank at most 2.
//!
//! Every lattice point of `N̄` in the window is an open circle, filled when
//! it lies in the fine support for the torsion coordinates of its panel.
//! Each element of `N_tor` gets its own panel, laid out left to right.
//! Coordinates are exact rationals printed with two decimals.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::IntVector;
use crate::kmfan::KmFan;

const CELL: i64 = 24;
const MARGIN: i64 = 20;
const LABEL: i64 = 18;
const GAP: i64 = 16;
const MAX_LAYERS: usize = 64;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Rounds to two decimals, halves away from zero.
fn fmt2(x: &BigRational) -> String {
    let h = x * q(100);
    let n: BigInt = h.numer().abs() * 2 + h.denom();
    let c = n.div_floor(&(h.denom() * BigInt::from(2)));
    let c = if h.is_negative() { -c } else { c };
    let sign = if c.is_negative() { "-" } else { "" };
    let (i, f) = c.abs().div_rem(&BigInt::from(100));
    format!("{sign}{i}.{f:02}")
}

fn elements(orders: &[BigInt]) -> Vec<IntVector> {
    let mut out = vec![Vec::new()];
    for d in orders {
        let d = i64::try_from(d).unwrap_or(i64::MAX);
        out = out
            .into_iter()
            .flat_map(|e: IntVector| {
                (0..d).map(move |t| {
                    let mut e = e.clone();
                    e.push(t.into());
                    e
                })
            })
            .collect();
    }
    out
}

fn cross(a: &[BigRational], b: &[BigRational]) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

struct Panel {
    rank: usize,
    w: i64,
    x0: i64,
}

impl Panel {
    fn px(&self, v: &[BigRational]) -> (String, String) {
        let x = q(self.x0 + MARGIN) + (&v[0] + q(self.w)) * q(CELL);
        let y = if self.rank == 2 {
            q(LABEL + MARGIN) + (q(self.w) - &v[1]) * q(CELL)
        } else {
            q(LABEL + MARGIN)
        };
        (fmt2(&x), fmt2(&y))
    }

    /// The point where the ray through `r` leaves the window.
    fn exit(&self, r: &[BigInt]) -> Vec<BigRational> {
        let m = r.iter().map(|x| x.abs()).max().expect("nonzero ray");
        r.iter().map(|x| BigRational::new(x * BigInt::from(self.w), m.clone())).collect()
    }
}

/// Draws `fan` in the window `[-w, w]^r`.
pub fn draw_svg(fan: &KmFan, w: u32) -> Result<String> {
    let g = fan.group();
    let r = g.free_rank();
    if r > 2 {
        return Err(Error::RankTooHigh(r));
    }
    if w == 0 {
        return Err(Error::InvalidArgument("the window must be at least 1".into()));
    }
    if g.torsion_order() > BigInt::from(MAX_LAYERS) {
        return Err(Error::InvalidArgument(format!("more than {MAX_LAYERS} torsion layers")));
    }
    let w = i64::from(w);
    let layers = elements(g.torsion_invariants());
    let span = if r == 0 { 0 } else { 2 * w * CELL };
    let pw = span + 2 * MARGIN;
    let ph = LABEL + if r == 2 { span } else { 0 } + 2 * MARGIN;
    let width = layers.len() as i64 * pw + (layers.len() as i64 - 1) * GAP;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{ph}" viewBox="0 0 {width} {ph}">"#).unwrap();
    writeln!(s, r#"<rect width="{width}" height="{ph}" fill="white"/>"#).unwrap();
    for (k, t) in layers.iter().enumerate() {
        let p = Panel { rank: r, w, x0: k as i64 * (pw + GAP) };
        writeln!(s, r#"<g id="layer-{k}">"#).unwrap();
        if !t.is_empty() {
            let label: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            writeln!(s, r#"<text x="{}" y="{}" font-family="monospace" font-size="12">t = ({})</text>"#, p.x0 + MARGIN, LABEL - 4, label.join(",")).unwrap();
        }
        let origin = vec![q(0); r];
        for c in fan.cones().iter().filter(|c| c.dim() == 2) {
            let mut rays: Vec<Vec<BigRational>> = c.rays().iter().map(|v| p.exit(v)).collect();
            if cross(&rays[0], &rays[1]).is_negative() {
                rays.swap(0, 1);
            }
            let mut pts = rays.clone();
            for (cx, cy) in [(-w, -w), (-w, w), (w, -w), (w, w)] {
                if c.contains_point(&[cx.into(), cy.into()]) {
                    pts.push(vec![q(cx), q(cy)]);
                }
            }
            pts.sort_by(|a, b| {
                let x = cross(a, b);
                if x.is_zero() {
                    Ordering::Equal
                } else if x.is_positive() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            });
            pts.dedup();
            let mut d = Vec::new();
            for v in std::iter::once(&origin).chain(&pts) {
                let (x, y) = p.px(v);
                d.push(format!("{x},{y}"));
            }
            writeln!(s, r##"<polygon points="{}" fill="#dde3f0" stroke="none"/>"##, d.join(" ")).unwrap();
        }
        for c in fan.cones().iter().filter(|c| c.dim() == 1) {
            let (x1, y1) = p.px(&origin);
            let (x2, y2) = p.px(&p.exit(&c.rays()[0]));
            writeln!(s, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#44506a" stroke-width="2"/>"##).unwrap();
        }
        let coords: Vec<i64> = (-w..=w).collect();
        let mut points: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..r {
            points = points.into_iter().flat_map(|v| coords.iter().map(move |&x| [v.clone(), vec![x]].concat())).collect();
        }
        for v in points {
            let mut n: IntVector = v.iter().map(|&x| BigInt::from(x)).collect();
            n.extend(t.iter().cloned());
            let filled = fan.support_contains(&n)?;
            let rv: Vec<BigRational> = v.iter().map(|&x| q(x)).collect();
            let (x, y) = p.px(&rv);
            let fill = if filled { "black" } else { "white" };
            writeln!(s, r#"<circle cx="{x}" cy="{y}" r="4" fill="{fill}" stroke="black"/>"#).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}
