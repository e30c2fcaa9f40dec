//! SVG pictures for rank-2 examples. Coordinates are rounded from exact rationals.

use crate::error::{Error, Result};
use crate::exactlin::{Int, Rat};
use crate::gkz::SecondaryFan;
use crate::model::ToricModel;
use crate::theta::{enumerate_theta, Variant, Zonotope};
use num_traits::{One, Signed, Zero};
use std::fmt::Write;

const SIZE: i64 = 400;
const MARGIN: i64 = 30;

fn rank2_only() -> Error {
    Error::Precondition("plot supports rank 2 only".into())
}

/// Two decimals, half away from zero.
fn fmt(q: &Rat) -> String {
    let h = (q * Rat::from_integer(Int::from(100))).round().to_integer();
    let sign = if h.is_negative() { "-" } else { "" };
    let a = h.abs();
    let (i, f) = (&a / Int::from(100), &a % Int::from(100));
    format!("{sign}{i}.{f:0>2}")
}

/// Affine map from a rational window onto the canvas, y pointing up.
struct View {
    lo: [Rat; 2],
    scale: Rat,
}

impl View {
    fn new(lo: [Rat; 2], hi: [Rat; 2]) -> Self {
        let w = (&hi[0] - &lo[0]).max(&hi[1] - &lo[1]).max(Rat::one());
        let scale = Rat::from_integer(Int::from(SIZE - 2 * MARGIN)) / w;
        View { lo, scale }
    }

    fn x(&self, x: &Rat) -> String {
        fmt(&((x - &self.lo[0]) * &self.scale + Rat::from_integer(Int::from(MARGIN))))
    }

    fn y(&self, y: &Rat) -> String {
        fmt(&(Rat::from_integer(Int::from(SIZE - MARGIN)) - (y - &self.lo[1]) * &self.scale))
    }
}

struct Svg {
    body: String,
}

impl Svg {
    fn new() -> Self {
        Svg { body: String::new() }
    }

    fn line(&mut self, v: &View, a: &[Rat], b: &[Rat], style: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            v.x(&a[0]),
            v.y(&a[1]),
            v.x(&b[0]),
            v.y(&b[1])
        );
    }

    fn dot(&mut self, v: &View, p: &[Rat], filled: bool) {
        let fill = if filled { "black" } else { "white" };
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="3" fill="{fill}" stroke="black"/>"#,
            v.x(&p[0]),
            v.y(&p[1])
        );
    }

    fn text(&mut self, v: &View, p: &[Rat], s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="10" font-family="monospace">{s}</text>"#,
            v.x(&p[0]),
            v.y(&p[1])
        );
    }

    fn finish(self, title: &str) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<title>{title}</title>\n{}</svg>\n",
            self.body
        )
    }
}

fn r(x: &Int) -> Rat {
    Rat::from_integer(x.clone())
}

fn pt(v: &[Int]) -> Vec<Rat> {
    v.iter().map(r).collect()
}

fn label(c: &[Int]) -> String {
    format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// Scale to sup-norm one.
fn unit(v: &[Rat]) -> Vec<Rat> {
    let m = v.iter().map(|x| x.abs()).fold(Rat::zero(), |a, b| a.max(b));
    if m.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &m).collect()
}

fn check_rank(model: &ToricModel) -> Result<()> {
    if model.cl.free_rank != 2 {
        return Err(rank2_only());
    }
    Ok(())
}

/// Generator directions, walls and chamber labels on the sup-norm circle.
pub fn secondary_fan(model: &ToricModel, gkz: &SecondaryFan) -> Result<String> {
    check_rank(model)?;
    let edge = Rat::new(Int::from(5), Int::from(4));
    let v = View::new([-edge.clone(), -edge.clone()], [edge.clone(), edge]);
    let mut svg = Svg::new();
    let origin = vec![Rat::zero(), Rat::zero()];
    for f in gkz.faces.iter().filter(|f| f.dim == 1) {
        if let Some(ray) = f.rays.first() {
            let u = unit(&pt(ray));
            svg.line(&v, &origin, &u, r#"stroke="black" stroke-width="2""#);
            svg.text(&v, &u, &format!("face {}", f.id));
        }
    }
    for (j, d) in gkz.degrees.iter().enumerate() {
        let u: Vec<Rat> = unit(&pt(d)).iter().map(|x| x * Rat::new(Int::from(9), Int::from(10))).collect();
        svg.line(&v, &origin, &u, r#"stroke="gray" stroke-dasharray="4 3""#);
        svg.text(&v, &u, &format!("x{j}"));
    }
    for c in &gkz.chambers {
        let u: Vec<Rat> = unit(&pt(&c.sample)[..2]).iter().map(|x| x * Rat::new(Int::from(1), Int::from(2))).collect();
        svg.text(&v, &u, &format!("chamber {}", c.id));
    }
    Ok(svg.finish(&format!("secondary fan of {}", model.name)))
}

/// Convex hull, counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[Int], a: &[Int], b: &[Int]| (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0]);
    let mut lower: Vec<Vec<Int>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Int::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Int>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Int::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The half-open zonotope: solid edges belong to it, dashed ones do not.
/// Filled dots are Θ classes, hollow ones other lattice points of Z.
pub fn zonotope(model: &ToricModel) -> Result<String> {
    check_rank(model)?;
    let z = Zonotope::full(&model.cl);
    let k = z.generators.len();
    let mut sums = Vec::with_capacity(1 << k);
    for mask in 0u64..(1u64 << k) {
        let mut s = vec![Int::zero(), Int::zero()];
        for (i, g) in z.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s[0] -= &g[0];
                s[1] -= &g[1];
            }
        }
        sums.push(s);
    }
    let verts = hull(sums);
    let (lo, hi) = z.bounding_box();
    let v =
        View::new([r(&lo[0]) - Rat::one(), r(&lo[1]) - Rat::one()], [r(&hi[0]) + Rat::one(), r(&hi[1]) + Rat::one()]);
    let mut svg = Svg::new();
    for i in 0..verts.len() {
        let a = pt(&verts[i]);
        let b = pt(&verts[(i + 1) % verts.len()]);
        let mid: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| (x + y) / r(&Int::from(2))).collect();
        let style = if z.contains(&mid) {
            r#"stroke="black" stroke-width="2""#
        } else {
            r#"stroke="black" stroke-dasharray="5 4""#
        };
        svg.line(&v, &a, &b, style);
    }
    let theta: Vec<Vec<Int>> = enumerate_theta(&model.betas(), &model.cl, Variant::Standard)
        .into_iter()
        .map(|e| model.cl.free_part(&e.class))
        .collect();
    for p in z.lattice_points() {
        let filled = theta.contains(&p);
        svg.dot(&v, &pt(&p), filled);
        if filled {
            svg.text(&v, &pt(&p), &label(&p));
        }
    }
    Ok(svg.finish(&format!("zonotope of {}", model.name)))
}

/// The unit square of M_R with the walls ⟨θ, β⟩ ∈ Z; each Θ witness is labelled by its class.
pub fn theta(model: &ToricModel) -> Result<String> {
    if model.dim != 2 {
        return Err(rank2_only());
    }
    let v = View::new([Rat::zero(), Rat::zero()], [Rat::one(), Rat::one()]);
    let mut svg = Svg::new();
    let corners = [[0i64, 0], [1, 0], [1, 1], [0, 1]];
    let corner = |c: &[i64; 2]| vec![r(&Int::from(c[0])), r(&Int::from(c[1]))];
    for i in 0..4 {
        svg.line(&v, &corner(&corners[i]), &corner(&corners[(i + 1) % 4]), r#"stroke="black""#);
    }
    for b in model.betas() {
        let (a, c) = (r(&b[0]), r(&b[1]));
        let vals: Vec<Rat> = corners.iter().map(|p| &a * r(&Int::from(p[0])) + &c * r(&Int::from(p[1]))).collect();
        let lo = vals.iter().min().cloned().unwrap_or_default().ceil().to_integer();
        let hi = vals.iter().max().cloned().unwrap_or_default().floor().to_integer();
        let mut k = lo;
        while k <= hi {
            let kk = r(&k);
            let mut hits: Vec<Vec<Rat>> = Vec::new();
            for t in [Rat::zero(), Rat::one()] {
                if !c.is_zero() {
                    let y = (&kk - &a * &t) / &c;
                    if y >= Rat::zero() && y <= Rat::one() {
                        hits.push(vec![t.clone(), y]);
                    }
                }
                if !a.is_zero() {
                    let x = (&kk - &c * &t) / &a;
                    if x >= Rat::zero() && x <= Rat::one() {
                        hits.push(vec![x, t.clone()]);
                    }
                }
            }
            hits.sort();
            hits.dedup();
            if hits.len() >= 2 {
                let (p, q) = (&hits[0], &hits[hits.len() - 1]);
                if p != q {
                    svg.line(&v, p, q, r#"stroke="gray""#);
                }
            }
            k += 1;
        }
    }
    for e in enumerate_theta(&model.betas(), &model.cl, Variant::Standard) {
        let w: Vec<Rat> = e.witness.iter().map(|x| x - x.floor()).collect();
        svg.dot(&v, &w, true);
        svg.text(&v, &w, &label(&e.class));
    }
    Ok(svg.finish(&format!("theta cells of {}", model.name)))
}
