//! The Cox-category layer: chamber assignment of Θ, the Hom algebra, the
//! exceptionality verdict and the Θ-transform checks.

use crate::cohomology::{ceiling_divisor, hom_theta, CohomologyEngine, HomSpace};
use crate::divisor::{support_function, Class, SupportFunction};
use crate::error::{inv, pre, Result};
use crate::exactlin::{ceil, dot_ri, floor, rats_of, to_rat, Dim, Int, LpOutcome, Rat, RationalPolyhedron};
use crate::fan::{common_stacky_refinement, StackyFan};
use crate::gkz::{in_cone, Cell, SecondaryFan};
use crate::model::ToricModel;
use crate::theta::ThetaElement;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignedElement {
    pub element: ThetaElement,
    /// Chamber of d (the lowest-id chamber whose closure contains d).
    pub chamber: usize,
    pub cell: Cell,
    /// For wall elements: chambers compared and whether the support functions agreed.
    pub agreement: Vec<(usize, usize, bool)>,
}

impl AssignedElement {
    pub fn d(&self) -> Class {
        self.element.class.iter().map(|x| -x).collect()
    }
}

fn rat_vec(a: &[Int]) -> Vec<Rat> {
    rats_of(a)
}

/// Assign every Θ element to a chamber; wall elements are checked for
/// agreement of the support functions of all adjacent chambers.
pub fn build_theta_cox(model: &ToricModel, gkz: &SecondaryFan, theta: &[ThetaElement]) -> Result<Vec<AssignedElement>> {
    let betas = model.betas();
    let mut out = Vec::with_capacity(theta.len());
    for e in theta {
        let d = model.cl.neg(&e.class);
        let cell = gkz.chamber_of(model, &d)?;
        let candidates: Vec<usize> = match cell {
            Cell::Chamber(c) => vec![c],
            Cell::Face(f) => gkz.faces[f].chambers.clone(),
        };
        let Some(&chamber) = candidates.first() else {
            return inv("effective class lies in no chamber closure");
        };
        let dd = rat_vec(&ceiling_divisor(&betas, &e.witness));
        let mut agreement = Vec::new();
        for (x, &k) in candidates.iter().enumerate() {
            for &l in &candidates[x + 1..] {
                let sk = gkz.stack(model, k);
                let sl = gkz.stack(model, l);
                let fk = support_function(&sk, &dd)?;
                let fl = support_function(&sl, &dd)?;
                let mut rays = sk.fan.used_rays();
                rays.extend(sl.fan.used_rays());
                rays.sort_unstable();
                rays.dedup();
                let ok = rays.iter().all(|&r| {
                    let v = rat_vec(&betas[r]);
                    fk.eval(&sk, &v) == fl.eval(&sl, &v)
                });
                if !ok {
                    return inv(format!("support functions of chambers {k} and {l} disagree on a wall element"));
                }
                agreement.push((k, l, ok));
            }
        }
        out.push(AssignedElement { element: e.clone(), chamber, cell, agreement });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndAlgebra {
    /// Element indices in collection order.
    pub order: Vec<usize>,
    pub classes: Vec<Class>,
    /// homs[i][j] = Hom(E_i → E_j), positions in the order.
    pub homs: Vec<Vec<HomSpace>>,
}

impl EndAlgebra {
    pub fn dims(&self) -> Vec<Vec<Dim>> {
        self.homs.iter().map(|r| r.iter().map(|h| h.dim.clone()).collect()).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Composition E_i → E_j → E_k of basis monomials: exponent addition.
    pub fn compose(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    /// Every product of basis monomials lands in the basis of the composite Hom space.
    pub fn composition_closed(&self) -> bool {
        let k = self.len();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let target = &self.homs[i][l];
                    if target.dim == Dim::Infinite {
                        continue;
                    }
                    for x in &self.homs[i][j].basis {
                        for y in &self.homs[j][l].basis {
                            if !target.basis.contains(&self.compose(x, y)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Hom spaces between the ordered elements, from the θ witnesses.
pub fn endomorphism_algebra(model: &ToricModel, elems: &[AssignedElement], order: &[usize]) -> Result<EndAlgebra> {
    let betas = model.betas();
    let mut homs = Vec::with_capacity(order.len());
    for &a in order {
        let mut row = Vec::with_capacity(order.len());
        for &b in order {
            row.push(hom_theta(&betas, &elems[a].element.witness, &elems[b].element.witness)?);
        }
        homs.push(row);
    }
    Ok(EndAlgebra {
        order: order.to_vec(),
        classes: order.iter().map(|&i| elems[i].element.class.clone()).collect(),
        homs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub source: usize,
    pub target: usize,
    pub chamber: usize,
    pub cohomology: Vec<Dim>,
    pub algebra: Dim,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalVerdict {
    /// False for the tilting form of the check (no order, non-complete case).
    pub ordered: bool,
    pub pairs_checked: usize,
    pub end_is_field: bool,
    pub triangular: bool,
    pub ext_vanishes: bool,
    pub h0_matches: bool,
    pub violations: Vec<String>,
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

/// End = k, triangularity, and Ext concentration through chamber cohomology.
/// With `ordered = false` only the Ext concentration and H⁰ agreement are required.
pub fn check_full_strong_exceptional(
    model: &ToricModel,
    gkz: &SecondaryFan,
    elems: &[AssignedElement],
    alg: &EndAlgebra,
    ordered: bool,
) -> Result<ExceptionalVerdict> {
    let k = alg.len();
    let mut violations = Vec::new();
    let mut end_is_field = true;
    let mut triangular = true;
    for i in 0..k {
        if alg.homs[i][i].dim != Dim::Finite(1) {
            end_is_field = false;
            if ordered {
                violations.push(format!("End of element {i} has dimension {}", alg.homs[i][i].dim));
            }
        }
        for j in i + 1..k {
            if !alg.homs[i][j].dim.is_zero() {
                triangular = false;
                if ordered {
                    violations.push(format!("Hom from position {i} to later position {j} is nonzero"));
                }
            }
        }
    }
    let mut engines: BTreeMap<usize, CohomologyEngine> = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut ext_vanishes = true;
    let mut h0_matches = true;
    for (i, &a) in alg.order.iter().enumerate() {
        let chamber = elems[a].chamber;
        if let std::collections::btree_map::Entry::Vacant(v) = engines.entry(chamber) {
            v.insert(CohomologyEngine::new(&gkz.stack(model, chamber), 0)?);
        }
        let engine = &engines[&chamber];
        for (j, &b) in alg.order.iter().enumerate() {
            let c = model.cl.sub(&elems[b].element.class, &elems[a].element.class);
            let table = engine.cohomology(&model.cl.lift(&c))?;
            let higher = table.dims.iter().skip(1).all(|x| x.is_zero());
            let same = table.dims[0] == alg.homs[i][j].dim;
            if !higher {
                ext_vanishes = false;
                violations.push(format!("higher Ext between positions {i} and {j}: {:?}", table.dims));
            }
            if !same {
                h0_matches = false;
                violations.push(format!(
                    "H0 between positions {i} and {j} is {} but the algebra has {}",
                    table.dims[0], alg.homs[i][j].dim
                ));
            }
            pairs.push(PairCheck {
                source: i,
                target: j,
                chamber,
                cohomology: table.dims.clone(),
                algebra: alg.homs[i][j].dim.clone(),
                pass: higher && same,
            });
        }
    }
    let pass = ext_vanishes && h0_matches && (!ordered || (end_is_field && triangular));
    Ok(ExceptionalVerdict {
        ordered,
        pairs_checked: pairs.len(),
        end_is_field,
        triangular,
        ext_vanishes,
        h0_matches,
        violations,
        pairs,
        pass,
    })
}

/// Lattice-set comparison of two polyhedra on one chart of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCheck {
    /// Maximal cone of the target fan.
    pub cone: Vec<usize>,
    pub recession_equal: bool,
    /// A lattice point of the target chart missing from the pushed-forward one.
    pub missing: Option<Vec<Int>>,
    /// A lattice point of the pushed-forward chart outside the target one.
    pub extra: Option<Vec<Int>>,
    /// Search boxes (lo, hi) used for the emptiness tests.
    pub boxes: Vec<(Vec<Int>, Vec<Int>)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCheck {
    pub theta_in_pd: bool,
    /// Per ray α of the target fan: min over P_d of ⟨k, β_α⟩ ≥ ⌊−⟨θ, β_α⟩⌋.
    pub facets: Vec<(usize, bool)>,
    /// Weights m checked explicitly over all battery twists.
    pub weights_checked: usize,
    /// Some twist and weight gave a non-convex difference.
    pub nonconvex_seen: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatteryCheck {
    pub twist: Class,
    pub dims: Vec<Dim>,
    pub predicted_h0: Dim,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub source: usize,
    pub target: usize,
    pub class: Class,
    pub charts: Vec<ChartCheck>,
    pub star: Option<StarCheck>,
    pub battery: Vec<BatteryCheck>,
    pub pass: bool,
}

/// Source and target stacks, the refinement, and pullback helpers.
struct Transform {
    si: StackyFan,
    sj: StackyFan,
    lambda: StackyFan,
    lbetas: Vec<Vec<Int>>,
}

impl Transform {
    fn new(model: &ToricModel, gkz: &SecondaryFan, i: usize, j: usize) -> Result<Self> {
        if !model.is_plain() {
            return pre("transform checks need b_ρ = 1");
        }
        let si = gkz.stack(model, i);
        let sj = gkz.stack(model, j);
        let (fi, _) = si.fan.compact();
        let (fj, _) = sj.fan.compact();
        let r = common_stacky_refinement(&[fi, fj])?;
        let lbetas = r.lambda.betas();
        Ok(Transform { si, sj, lambda: r.lambda, lbetas })
    }

    /// Coefficients of the pullback of the divisor along the refinement.
    fn pullback(&self, sf: &StackyFan, f: &SupportFunction) -> Result<Vec<Int>> {
        let mut out = Vec::with_capacity(self.lbetas.len());
        for b in &self.lbetas {
            let v = f
                .eval(sf, &rats_of(b))
                .ok_or_else(|| crate::error::Error::Invariant("refinement ray outside the support".into()))?;
            if !v.is_integer() {
                return inv("pullback is not integral on the refinement");
            }
            out.push(-v.to_integer());
        }
        Ok(out)
    }
}

fn charts(model: &ToricModel, t: &Transform, a: &[Int]) -> Result<Vec<ChartCheck>> {
    let betas = model.betas();
    let fi = support_function(&t.si, &rat_vec(a))?;
    let n = model.dim;
    let mut out = Vec::new();
    for cone in &t.sj.fan.cones {
        let gens: Vec<Vec<Int>> = cone.iter().map(|&r| betas[r].clone()).collect();
        let inside: Vec<&Vec<Int>> = t.lbetas.iter().filter(|b| in_cone(&gens, &rats_of(b))).collect();
        let mut q1 = RationalPolyhedron::new(n);
        for b in &inside {
            let v = fi.eval(&t.si, &rats_of(b)).expect("refinement ray in the support");
            q1.ge(rats_of(b), v);
        }
        let mut q2 = RationalPolyhedron::new(n);
        for &r in cone {
            q2.ge(rats_of(&betas[r]), -to_rat(&a[r]));
        }
        let inside_owned: Vec<Vec<Int>> = inside.iter().map(|b| (*b).clone()).collect();
        let recession_equal = inside_owned.iter().all(|b| in_cone(&gens, &rats_of(b)))
            && gens.iter().all(|g| in_cone(&inside_owned, &rats_of(g)));
        let mut boxes = Vec::new();
        let missing = difference_point(&q2, &q1, &mut boxes);
        let extra = difference_point(&q1, &q2, &mut boxes);
        let pass = recession_equal && missing.is_none() && extra.is_none();
        out.push(ChartCheck { cone: cone.clone(), recession_equal, missing, extra, boxes, pass });
    }
    Ok(out)
}

/// A lattice point of `p` violating some inequality of `q`, if any.
fn difference_point(
    p: &RationalPolyhedron,
    q: &RationalPolyhedron,
    boxes: &mut Vec<(Vec<Int>, Vec<Int>)>,
) -> Option<Vec<Int>> {
    for ineq in &q.ineqs {
        let mut s = p.clone();
        // integral version of ⟨normal, m⟩ < offset for a primitive integral normal
        let l = crate::exactlin::denom_lcm(&ineq.normal);
        let lr = to_rat(&l);
        let normal: Vec<Rat> = ineq.normal.iter().map(|x| x * &lr).collect();
        let bound = ceil(&(&ineq.offset * &lr)) - Int::from(1);
        s.le(normal, to_rat(&bound));
        if let Some(b) = s.integer_search_box() {
            boxes.push(b);
        }
        if let Some(x) = s.integer_point() {
            return Some(x);
        }
    }
    None
}

fn nef_battery_classes(model: &ToricModel, gkz: &SecondaryFan, j: usize, limit: usize) -> Vec<Class> {
    let rays: Vec<Class> = gkz.chambers[j].rays.iter().map(|r| pad(model, r)).collect();
    let mut out: Vec<Class> = rays.clone();
    for x in 0..rays.len() {
        for y in x..rays.len() {
            out.push(model.cl.add(&rays[x], &rays[y]));
        }
    }
    out.sort();
    out.dedup();
    out.truncate(limit);
    out
}

fn pad(model: &ToricModel, free: &[Int]) -> Class {
    let mut c = free.to_vec();
    c.resize(model.cl.rank() + model.cl.torsion.len(), Int::zero());
    c
}

/// Cohomology on the refinement of π_j^*A ⊗ π_i^*O(a).
fn twisted_cohomology(
    model: &ToricModel,
    t: &Transform,
    engine: &CohomologyEngine,
    a: &[Int],
    twist: &Class,
) -> Result<Vec<Dim>> {
    let lift = model.cl.lift(twist);
    let fa = support_function(&t.sj, &rat_vec(&lift))?;
    let fd = support_function(&t.si, &rat_vec(a))?;
    let pa = t.pullback(&t.sj, &fa)?;
    let pd = t.pullback(&t.si, &fd)?;
    let e: Vec<Int> = pa.iter().zip(&pd).map(|(x, y)| x + y).collect();
    Ok(engine.cohomology(&e)?.dims)
}

/// Checks that π_j* π_i^* O_{X_i}(−d) = O_{X_j}(−d) for an element of Θ with d in Γ_i.
pub fn verify_theta_transform(
    model: &ToricModel,
    gkz: &SecondaryFan,
    i: usize,
    j: usize,
    elem: &ThetaElement,
    battery: usize,
) -> Result<TransformReport> {
    let d = model.cl.neg(&elem.class);
    if !gkz.in_closure(i, &d) {
        return pre("d is not in the source chamber; use transform_line_bundle for diagnostics");
    }
    let betas = model.betas();
    let n = model.dim;
    let theta = &elem.witness;
    let dd = ceiling_divisor(&betas, theta);
    let a: Vec<Int> = dd.iter().map(|x| -x).collect();
    let t = Transform::new(model, gkz, i, j)?;
    let chart_checks = charts(model, &t, &a)?;

    // P_d on the refinement: {k : ⟨k, β̃⟩ ≥ G(β̃)} with G the support function of d on Σ_i
    let gd = support_function(&t.si, &rat_vec(&dd))?;
    let mut pd = RationalPolyhedron::new(n);
    for b in &t.lbetas {
        let v = gd.eval(&t.si, &rats_of(b)).expect("refinement ray in the support");
        pd.ge(rats_of(b), v);
    }
    let neg_theta: Vec<Rat> = theta.iter().map(|x| -x).collect();
    let theta_in_pd = pd.contains(&neg_theta);
    let mut facets = Vec::new();
    for &alpha in &t.sj.fan.used_rays() {
        let bound = floor(&-dot_ri(theta, &betas[alpha]));
        let mut s = pd.clone();
        s.lt(rats_of(&betas[alpha]), to_rat(&bound));
        facets.push((alpha, s.feasible().is_none()));
    }

    let engine = CohomologyEngine::new(&t.lambda, 0)?;
    let twists = nef_battery_classes(model, gkz, j, battery);
    // {k ∈ P_d : ⟨k, β_α⟩ < off} is nonempty iff off exceeds the minimum of ⟨·, β_α⟩ on P_d
    let used = t.sj.fan.used_rays();
    let minima: Vec<LpOutcome> =
        used.iter().map(|&alpha| pd.maximize(&betas[alpha].iter().map(|x| -to_rat(x)).collect::<Vec<_>>())).collect();
    let meets = |k: usize, off: &Rat| match &minima[k] {
        LpOutcome::Optimal { value, .. } => -value < *off,
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    };
    let mut bat = Vec::new();
    let mut weights_checked = 0usize;
    let mut nonconvex_seen = false;
    let mut explicit_ok = true;
    for tw in &twists {
        let lift = model.cl.lift(tw);
        let dims = twisted_cohomology(model, &t, &engine, &a, tw)?;
        let mut pred = RationalPolyhedron::new(n);
        let mut pa = RationalPolyhedron::new(n);
        for &r in &t.sj.fan.used_rays() {
            pred.ge(rats_of(&betas[r]), dot_ri(theta, &betas[r]) - to_rat(&lift[r]));
            pa.ge(rats_of(&betas[r]), -to_rat(&lift[r]));
        }
        let predicted = pred.count_lattice();
        let pass = dims[0] == predicted && dims.iter().skip(1).all(|x| x.is_zero());
        bat.push(BatteryCheck { twist: tw.clone(), dims, predicted_h0: predicted, pass });

        // explicit star checks on a window of weights
        let (lo, hi) = weight_window(&pd, &pa, &neg_theta);
        let mut m = lo.clone();
        loop {
            weights_checked += 1;
            let mut pieces = 0usize;
            for (k, &alpha) in used.iter().enumerate() {
                // piece: k ∈ P_d with ⟨k + m, β_α⟩ < −a_α
                let off = -to_rat(&lift[alpha]) - to_rat(&crate::exactlin::dot_int(&m, &betas[alpha]));
                if meets(k, &off) {
                    pieces += 1;
                    if dot_ri(&neg_theta, &betas[alpha]) >= off {
                        explicit_ok = false;
                    }
                }
            }
            if pieces >= 2 {
                nonconvex_seen = true;
            }
            if !next_in_box(&mut m, &lo, &hi) {
                break;
            }
        }
    }
    let star = StarCheck {
        theta_in_pd,
        pass: theta_in_pd && facets.iter().all(|x| x.1) && explicit_ok,
        facets,
        weights_checked,
        nonconvex_seen,
    };
    let pass = chart_checks.iter().all(|c| c.pass) && star.pass && bat.iter().all(|b| b.pass);
    Ok(TransformReport {
        source: i,
        target: j,
        class: elem.class.clone(),
        charts: chart_checks,
        star: Some(star),
        battery: bat,
        pass,
    })
}

/// Weights m for which P_d and P_A − m can meet, widened by one; a fixed
/// window around −θ when either polyhedron is unbounded.
fn weight_window(pd: &RationalPolyhedron, pa: &RationalPolyhedron, center: &[Rat]) -> (Vec<Int>, Vec<Int>) {
    let n = pd.dim;
    if let (Ok(Some(bd)), Ok(Some(ba))) = (pd.bounds(), pa.bounds()) {
        let lo = (0..n).map(|k| floor(&(&ba[k].0 - &bd[k].1)) - Int::from(1)).collect();
        let hi = (0..n).map(|k| ceil(&(&ba[k].1 - &bd[k].0)) + Int::from(1)).collect();
        return (lo, hi);
    }
    let lo = center.iter().map(|c| floor(c) - Int::from(3)).collect();
    let hi = center.iter().map(|c| ceil(c) + Int::from(3)).collect();
    (lo, hi)
}

fn next_in_box(m: &mut [Int], lo: &[Int], hi: &[Int]) -> bool {
    for k in 0..m.len() {
        if m[k] < hi[k] {
            m[k] += 1;
            return true;
        }
        m[k] = lo[k].clone();
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleDiagnostic {
    pub source: usize,
    pub target: usize,
    pub class: Class,
    pub charts: Vec<ChartCheck>,
    /// (twist, cohomology on the refinement); the zero twist comes first.
    pub probes: Vec<(Class, Vec<Dim>)>,
    /// Some chart semigroup is strictly smaller than the line bundle's.
    pub smaller_semigroup: bool,
    pub higher_nonzero: bool,
    pub pass: bool,
}

/// The chart comparison and cohomology probes for an arbitrary class.
pub fn transform_line_bundle(
    model: &ToricModel,
    gkz: &SecondaryFan,
    i: usize,
    j: usize,
    class: &[Int],
    battery: usize,
) -> Result<LineBundleDiagnostic> {
    let a = model.cl.lift(class);
    let t = Transform::new(model, gkz, i, j)?;
    let chart_checks = charts(model, &t, &a)?;
    let engine = CohomologyEngine::new(&t.lambda, 0)?;
    let mut twists = vec![model.cl.zero()];
    twists.extend(nef_battery_classes(model, gkz, j, battery));
    let mut probes = Vec::new();
    for tw in twists {
        let dims = twisted_cohomology(model, &t, &engine, &a, &tw)?;
        probes.push((tw, dims));
    }
    let smaller_semigroup = chart_checks.iter().any(|c| c.missing.is_some());
    let higher_nonzero = probes.iter().any(|(_, d)| d.iter().skip(1).any(|x| !x.is_zero()));
    let pass = chart_checks.iter().all(|c| c.pass) && !higher_nonzero;
    Ok(LineBundleDiagnostic {
        source: i,
        target: j,
        class: class.to_vec(),
        charts: chart_checks,
        probes,
        smaller_semigroup,
        higher_nonzero,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformProbe {
    pub element: usize,
    pub source: usize,
    pub target: usize,
    pub higher_vanish: bool,
    pub r0_matches: bool,
}

/// Experimental: probes for Θ elements pushed from chambers other than their own.
pub fn uniform_vanishing_batch(
    model: &ToricModel,
    gkz: &SecondaryFan,
    elems: &[AssignedElement],
    battery: usize,
) -> Result<Vec<UniformProbe>> {
    let mut out = Vec::new();
    let nc = gkz.chambers.len();
    for (x, e) in elems.iter().enumerate() {
        for i in 0..nc {
            if gkz.in_closure(i, &e.d()) {
                continue;
            }
            for j in 0..nc {
                let diag = transform_line_bundle(model, gkz, i, j, &e.element.class, battery)?;
                out.push(UniformProbe {
                    element: x,
                    source: i,
                    target: j,
                    higher_vanish: !diag.higher_nonzero,
                    r0_matches: diag.charts.iter().all(|c| c.pass),
                });
            }
        }
    }
    Ok(out)
}

/// Whether −class has d in the closure of chamber i.
pub fn admissible(gkz: &SecondaryFan, i: usize, class: &[Int]) -> bool {
    let d: Vec<Int> = class.iter().map(|x| -x).collect();
    gkz.in_closure(i, &d)
}
