//! The secondary fan: chambers of the degree configuration, their fans and
//! irrelevant ideals, and generalized-fan data on every face.

use crate::divisor::{section_polyhedron_int, Class, ClassGroup};
use crate::error::{inv, pre, Result};
use crate::exactlin::{
    combinations, dot_int, dot_ri, int_kernel_basis, nullspace, primitive, primitive_of_rat, rank_rat, rats_of,
    solve_rat, to_rat, Int, IntMatrix, Rat, RationalPolyhedron,
};
use crate::fan::{validate_fan, Fan, GeneralizedFan, StackyFan};
use crate::model::ToricModel;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub id: usize,
    /// Integral interior point (sum of the extremal rays).
    pub sample: Class,
    /// Primitive extremal rays of the closed chamber, free coordinates.
    pub rays: Vec<Vec<Int>>,
    pub fan: Fan,
    /// Complements of the maximal cones; generators of the irrelevant ideal.
    pub irrelevant: Vec<Vec<usize>>,
    /// Closed chamber = {d : ⟨h, d⟩ ≥ 0 for every h}.
    pub inequalities: Vec<Vec<Rat>>,
    pub face: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    /// Integral point of the relative interior.
    pub sample: Class,
    pub rays: Vec<Vec<Int>>,
    pub data: GeneralizedFan,
    /// Set when the face is a maximal chamber.
    pub chamber: Option<usize>,
    /// Chambers whose closure contains the face.
    pub chambers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondaryFan {
    pub cl: ClassGroup,
    pub degrees: Vec<Vec<Int>>,
    pub hyperplanes: Vec<Vec<Int>>,
    pub chambers: Vec<Chamber>,
    pub faces: Vec<Face>,
    /// (chamber, chamber, codimension-one face).
    pub walls: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Chamber(usize),
    Face(usize),
}

impl Cell {
    pub fn is_chamber(&self) -> bool {
        matches!(self, Cell::Chamber(_))
    }
}

fn free_degrees(cl: &ClassGroup) -> Vec<Vec<Int>> {
    cl.degrees().iter().map(|d| cl.free_part(d)).collect()
}

fn pad(cl: &ClassGroup, free: Vec<Int>) -> Class {
    let mut c = free;
    c.resize(cl.rank() + cl.torsion.len(), Int::zero());
    c
}

/// Normals of hyperplanes spanned by (r−1)-subsets, primitive with positive
/// leading entry, sorted.
pub fn degree_hyperplanes(degrees: &[Vec<Int>], r: usize) -> Vec<Vec<Int>> {
    if r == 1 {
        return vec![vec![Int::one()]];
    }
    let mut out = BTreeSet::new();
    for s in combinations(degrees.len(), r - 1) {
        let rows: Vec<Vec<Rat>> = s.iter().map(|&i| rats_of(&degrees[i])).collect();
        if rank_rat(&rows) != r - 1 {
            continue;
        }
        let ns = nullspace(&rows, r);
        let mut h = primitive_of_rat(&ns[0]);
        if h.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            h = h.iter().map(|x| -x).collect();
        }
        out.insert(h);
    }
    out.into_iter().collect()
}

/// Whether the rational vector lies in pos(gens).
pub fn in_cone(gens: &[Vec<Int>], x: &[Rat]) -> bool {
    if x.iter().all(|v| v.is_zero()) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let mut p = RationalPolyhedron::new(gens.len());
    for k in 0..x.len() {
        p.equal(gens.iter().map(|g| to_rat(&g[k])).collect(), x[k].clone());
    }
    for i in 0..gens.len() {
        let mut e = vec![Rat::zero(); gens.len()];
        e[i] = Rat::one();
        p.ge(e, Rat::zero());
    }
    p.feasible().is_some()
}

/// Primitive extremal rays of pos(gens) for a pointed cone, sorted.
pub fn extreme_rays(gens: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let prims: BTreeSet<Vec<Int>> =
        gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).map(|g| primitive(g)).collect();
    let prims: Vec<Vec<Int>> = prims.into_iter().collect();
    prims
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            let others: Vec<Vec<Int>> =
                prims.iter().enumerate().filter(|(j, _)| j != i).map(|(_, h)| h.clone()).collect();
            !in_cone(&others, &rats_of(g))
        })
        .map(|(_, g)| g.clone())
        .collect()
}

/// Coordinates of d in the basis given by the complement degrees, if they form a basis.
fn complement_coords(deg: &[Vec<Int>], comp: &[usize], d: &[Rat]) -> Option<Vec<Rat>> {
    let r = d.len();
    if comp.len() != r {
        return None;
    }
    let m: Vec<Vec<Rat>> = (0..r).map(|k| comp.iter().map(|&j| to_rat(&deg[j][k])).collect()).collect();
    if rank_rat(&m) < r {
        return None;
    }
    solve_rat(&m, d)
}

/// The fan of a generic point of the effective cone.
pub fn fan_of_point(model: &ToricModel, d: &[Rat]) -> Result<Fan> {
    let deg = free_degrees(&model.cl);
    let r = model.cl.rank();
    if d.len() != r {
        return pre(format!("expected a class with {r} free coordinates"));
    }
    let n = model.dim;
    let nr = model.nrays();
    let mut cones = Vec::new();
    for sigma in combinations(nr, n) {
        let comp: Vec<usize> = (0..nr).filter(|j| !sigma.contains(j)).collect();
        match complement_coords(&deg, &comp, d) {
            Some(c) => {
                if c.iter().all(|x| x.is_positive()) {
                    let rows: Vec<Vec<Rat>> = sigma.iter().map(|&i| rats_of(&model.rays[i])).collect();
                    if rank_rat(&rows) == n {
                        cones.push(sigma);
                    }
                } else if c.iter().all(|x| !x.is_negative()) {
                    return pre("class lies on a wall of the secondary fan; use face_data");
                }
            }
            None => {
                let cg: Vec<Vec<Int>> = comp.iter().map(|&j| deg[j].clone()).collect();
                if in_cone(&cg, d) {
                    return pre("class lies on a wall of the secondary fan; use face_data");
                }
            }
        }
    }
    if cones.is_empty() {
        return pre("class is not in the interior of the effective cone");
    }
    validate_fan(n, model.rays.clone(), cones).or_else(|v| inv(format!("chamber fan is not a fan: {}", v[0])))
}

/// Generalized fan of the section polyhedron of a divisor: its normal quasi-fan.
pub fn face_data(model: &ToricModel, a: &[Int]) -> Result<GeneralizedFan> {
    let betas = model.betas();
    let n = model.dim;
    let p = section_polyhedron_int(&betas, a);
    if p.feasible().is_none() {
        return pre("class is not effective");
    }
    let verts = p.vertices();
    let rec = p.recession_rays();
    let tight_at =
        |v: &[Rat]| -> Vec<usize> { (0..betas.len()).filter(|&j| dot_ri(v, &betas[j]) == -to_rat(&a[j])).collect() };
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in &verts {
        cones.insert(tight_at(v));
    }
    let tight: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    let contracted: Vec<usize> = (0..betas.len()).filter(|j| !tight.contains(j)).collect();

    let mut rows: Vec<Vec<Int>> = rec.clone();
    for v in verts.iter().skip(1) {
        let diff: Vec<Rat> = v.iter().zip(&verts[0]).map(|(x, y)| x - y).collect();
        if diff.iter().any(|x| !x.is_zero()) {
            rows.push(primitive_of_rat(&diff));
        }
    }
    let identity = || (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect();
    let lineality: Vec<Vec<Int>> =
        if rows.is_empty() { identity() } else { int_kernel_basis(&IntMatrix::from_rows(&rows)) };
    let quotient_basis: Vec<Vec<Int>> =
        if lineality.is_empty() { identity() } else { int_kernel_basis(&IntMatrix::from_rows(&lineality)) };
    let proj = |u: &[Int]| -> Vec<Int> { quotient_basis.iter().map(|w| dot_int(w, u)).collect() };

    let cones: Vec<Vec<usize>> = cones.into_iter().collect();
    let per_cone: Vec<Vec<Vec<Int>>> =
        cones.iter().map(|c| extreme_rays(&c.iter().map(|&j| proj(&model.rays[j])).collect::<Vec<_>>())).collect();
    let qrays: BTreeSet<Vec<Int>> = per_cone.iter().flatten().cloned().collect();
    let quotient_rays: Vec<Vec<Int>> = qrays.into_iter().collect();
    let index = |r: &Vec<Int>| quotient_rays.iter().position(|q| q == r).expect("quotient ray");
    let mut qc: BTreeSet<Vec<usize>> = BTreeSet::new();
    for rs in &per_cone {
        let mut c: Vec<usize> = rs.iter().map(index).collect();
        c.sort();
        qc.insert(c);
    }
    let ray_image = (0..betas.len())
        .map(|j| {
            if !tight.contains(&j) {
                return None;
            }
            let pu = proj(&model.rays[j]);
            if pu.iter().all(|x| x.is_zero()) {
                return None;
            }
            let pu = primitive(&pu);
            quotient_rays.iter().position(|q| *q == pu)
        })
        .collect();
    Ok(GeneralizedFan {
        lineality,
        quotient_basis,
        cones,
        quotient_rays,
        quotient_cones: qc.into_iter().collect(),
        ray_image,
        contracted,
    })
}

/// Relatively open cells of the arrangement inside the effective cone,
/// as sign vectors with an integral witness.
fn arrangement_cells(degrees: &[Vec<Int>], hyper: &[Vec<Int>]) -> Vec<(Vec<i8>, Vec<Int>)> {
    let r = degrees[0].len();
    let allowed: Vec<Vec<i8>> = hyper
        .iter()
        .map(|h| {
            let vals: Vec<Int> = degrees.iter().map(|g| dot_int(h, g)).collect();
            if vals.iter().all(|v| !v.is_negative()) {
                vec![0, 1]
            } else if vals.iter().all(|v| !v.is_positive()) {
                vec![0, -1]
            } else {
                vec![-1, 0, 1]
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut signs = Vec::new();
    let p = RationalPolyhedron::new(r);
    dfs(hyper, &allowed, &mut signs, p, &mut out);
    out
}

fn dfs(
    hyper: &[Vec<Int>],
    allowed: &[Vec<i8>],
    signs: &mut Vec<i8>,
    p: RationalPolyhedron,
    out: &mut Vec<(Vec<i8>, Vec<Int>)>,
) {
    let k = signs.len();
    if k == hyper.len() {
        if let Some(w) = p.feasible() {
            out.push((signs.clone(), primitive_of_rat(&w)));
        }
        return;
    }
    for &s in &allowed[k] {
        let mut q = p.clone();
        let h = rats_of(&hyper[k]);
        match s {
            0 => q.equal(h, Rat::zero()),
            1 => q.gt(h, Rat::zero()),
            _ => q.lt(h, Rat::zero()),
        }
        if q.feasible().is_none() {
            continue;
        }
        signs.push(s);
        dfs(hyper, allowed, signs, q, out);
        signs.pop();
    }
}

fn cell_rays(hyper: &[Vec<Int>], signs: &[i8]) -> Vec<Vec<Int>> {
    let r = hyper[0].len();
    let mut p = RationalPolyhedron::new(r);
    for (h, &s) in hyper.iter().zip(signs) {
        let h = rats_of(h);
        match s {
            0 => p.equal(h, Rat::zero()),
            1 => p.ge(h, Rat::zero()),
            _ => p.le(h, Rat::zero()),
        }
    }
    p.recession_rays()
}

/// Key identifying the secondary-fan cell of a divisor: the vertex tight sets.
fn face_key(g: &GeneralizedFan) -> Vec<Vec<usize>> {
    g.cones.clone()
}

fn sum_rays(rays: &[Vec<Int>], r: usize) -> Vec<Int> {
    let mut s = vec![Int::zero(); r];
    for v in rays {
        for (x, y) in s.iter_mut().zip(v) {
            *x += y;
        }
    }
    s
}

fn chamber_inequalities(deg: &[Vec<Int>], fan: &Fan) -> Vec<Vec<Rat>> {
    let r = deg[0].len();
    let nr = deg.len();
    let mut out = BTreeSet::new();
    for c in &fan.cones {
        let comp: Vec<usize> = (0..nr).filter(|j| !c.contains(j)).collect();
        // rows of the inverse of the complement degree matrix
        let m: Vec<Vec<Rat>> = (0..r).map(|k| comp.iter().map(|&j| to_rat(&deg[j][k])).collect()).collect();
        for i in 0..r {
            let mut e = vec![Rat::zero(); r];
            e[i] = Rat::one();
            // row i of m^{-1} is y with yᵀ m = e_i
            let mt: Vec<Vec<Rat>> = (0..r).map(|a| (0..r).map(|b| m[b][a].clone()).collect()).collect();
            if let Some(y) = solve_rat(&mt, &e) {
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

impl SecondaryFan {
    pub fn compute(model: &ToricModel) -> Result<Self> {
        let cl = &model.cl;
        let r = cl.rank();
        if r == 0 {
            return pre("class group has rank zero");
        }
        let deg = free_degrees(cl);
        let rows: Vec<Vec<Rat>> = deg.iter().map(|d| rats_of(d)).collect();
        if rank_rat(&rows) < r {
            return pre("degrees do not span the class group");
        }
        let hyper = degree_hyperplanes(&deg, r);
        let cells = arrangement_cells(&deg, &hyper);

        // group cells by their generalized fan
        let mut groups: BTreeMap<Vec<Vec<usize>>, (GeneralizedFan, Vec<Vec<Int>>)> = BTreeMap::new();
        for (signs, w) in &cells {
            let g = face_data(model, &cl.lift(&pad(cl, w.clone())))?;
            let entry = groups.entry(face_key(&g)).or_insert_with(|| (g, Vec::new()));
            entry.1.extend(cell_rays(&hyper, signs));
        }

        struct Raw {
            dim: usize,
            rays: Vec<Vec<Int>>,
            data: GeneralizedFan,
            fan: Option<Fan>,
        }
        let mut raws = Vec::new();
        for (_, (data, rays)) in groups {
            let rays = extreme_rays(&rays);
            let dim = rank_rat(&rays.iter().map(|v| rats_of(v)).collect::<Vec<_>>());
            let fan = if dim == r { Some(fan_of_point(model, &rats_of(&sum_rays(&rays, r)))?) } else { None };
            raws.push(Raw { dim, rays, data, fan });
        }

        // chamber order: the input fan first, then by cone sets
        let input_cones: Option<BTreeSet<Vec<usize>>> = model.fan.as_ref().map(|f| {
            f.cones
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort();
                    c
                })
                .collect()
        });
        let mut chamber_idx: Vec<usize> = (0..raws.len()).filter(|&i| raws[i].fan.is_some()).collect();
        chamber_idx.sort_by_key(|&i| {
            let cs: BTreeSet<Vec<usize>> = raws[i].fan.as_ref().unwrap().cones.iter().cloned().collect();
            (Some(&cs) != input_cones.as_ref(), cs.into_iter().collect::<Vec<_>>())
        });
        let mut face_idx: Vec<usize> = (0..raws.len()).collect();
        face_idx.sort_by(|&i, &j| (raws[i].dim, &raws[i].rays).cmp(&(raws[j].dim, &raws[j].rays)));
        let face_of: BTreeMap<usize, usize> = face_idx.iter().enumerate().map(|(fid, &i)| (i, fid)).collect();

        let mut chambers = Vec::new();
        for (cid, &i) in chamber_idx.iter().enumerate() {
            let fan = raws[i].fan.clone().unwrap();
            let nr = model.nrays();
            let irrelevant = fan.cones.iter().map(|c| (0..nr).filter(|j| !c.contains(j)).collect()).collect();
            let inequalities = chamber_inequalities(&deg, &fan);
            chambers.push(Chamber {
                id: cid,
                sample: pad(cl, sum_rays(&raws[i].rays, r)),
                rays: raws[i].rays.clone(),
                fan,
                irrelevant,
                inequalities,
                face: face_of[&i],
            });
        }
        let mut faces = Vec::new();
        for (fid, &i) in face_idx.iter().enumerate() {
            let sample = sum_rays(&raws[i].rays, r);
            let sr = rats_of(&sample);
            let containing: Vec<usize> = chambers
                .iter()
                .filter(|c| c.inequalities.iter().all(|h| !crate::exactlin::dot_rat(h, &sr).is_negative()))
                .map(|c| c.id)
                .collect();
            faces.push(Face {
                id: fid,
                dim: raws[i].dim,
                sample: pad(cl, sample),
                rays: raws[i].rays.clone(),
                data: raws[i].data.clone(),
                chamber: chamber_idx.iter().position(|&k| k == i),
                chambers: containing,
            });
        }
        let mut walls = Vec::new();
        for f in faces.iter().filter(|f| f.dim + 1 == r) {
            if f.chambers.len() == 2 {
                walls.push((f.chambers[0], f.chambers[1], f.id));
            }
        }
        walls.sort();
        Ok(SecondaryFan { cl: cl.clone(), degrees: deg, hyperplanes: hyper, chambers, faces, walls })
    }

    /// The cell whose relative interior contains the class.
    pub fn chamber_of(&self, model: &ToricModel, class: &[Int]) -> Result<Cell> {
        let free = self.cl.free_part(class);
        if !in_cone(&self.degrees, &rats_of(&free)) {
            return pre("class is not effective");
        }
        let g = face_data(model, &self.cl.lift(&pad(&self.cl, free)))?;
        let key = face_key(&g);
        let f = self
            .faces
            .iter()
            .find(|f| face_key(&f.data) == key)
            .ok_or_else(|| crate::error::Error::Invariant("class matches no face".into()))?;
        Ok(match f.chamber {
            Some(c) => Cell::Chamber(c),
            None => Cell::Face(f.id),
        })
    }

    /// Whether the class lies in the closed chamber.
    pub fn in_closure(&self, chamber: usize, class: &[Int]) -> bool {
        let x = rats_of(&self.cl.free_part(class));
        self.chambers[chamber].inequalities.iter().all(|h| !crate::exactlin::dot_rat(h, &x).is_negative())
    }

    /// Chamber stack of a chamber, with the model's multipliers.
    pub fn stack(&self, model: &ToricModel, chamber: usize) -> StackyFan {
        model.chamber_stack(&self.chambers[chamber].fan.cones)
    }
}

pub fn secondary_fan(model: &ToricModel) -> Result<SecondaryFan> {
    SecondaryFan::compute(model)
}
