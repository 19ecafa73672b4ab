//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest harness so the
//! lines are always visible; exits nonzero if any criterion fails.

use g1surf::basis::{self, BasisTag};
use g1surf::dimension::{self, SeparabilityMode};
use g1surf::fixtures::{self, CellSplit};
use g1surf::gluing::{self, GluedSurface, GluingError, Level};
use g1surf::linalg::{self, IntEchelon};
use g1surf::ratpoly::{int, FaceKind, Rational, UniPoly};
use g1surf::syzygy::{self, EdgeSpace, MuBasis};
use g1surf::verify;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exact(gs: &GluedSurface, k: usize) -> Result<usize, String> {
    dimension::dim_spline_space(gs, k, SeparabilityMode::Exact)
        .map(|r| r.dimension)
        .map_err(|e| e.to_string())
}

fn oracle(gs: &GluedSurface, k: usize) -> Result<usize, String> {
    verify::brute_force_dimension(gs, k).map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:?}, limit {limit:?}"))
    } else {
        Ok(t)
    }
}

fn round_corner() -> Outcome {
    let start = Instant::now();
    let gs = fixtures::round_corner();
    let d = exact(&gs, 4)?;
    let o = oracle(&gs, 4)?;
    ensure!(d == 48, "dimension {d}, expected 48");
    ensure!(o == 48, "oracle {o}, expected 48");
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("dim = 48, oracle = 48, {t:.2?}"))
}

fn pruned_octahedron() -> Outcome {
    let start = Instant::now();
    let gs = fixtures::pruned_octahedron();
    let mut dims = Vec::new();
    for k in 4..=8usize {
        let expected = (2 * k - 3) * (2 * k - 3) + k - 4;
        let d = exact(&gs, k)?;
        ensure!(d == expected, "k = {k}: dimension {d}, expected {expected}");
        if k <= 6 {
            let o = oracle(&gs, k)?;
            ensure!(o == expected, "k = {k}: oracle {o}, expected {expected}");
        }
        dims.push(d);
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "k = 4..8 -> {dims:?}, oracle agrees for k = 4..6, {t:.2?}"
    ))
}

fn random_triangulation(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> GluedSurface {
    let choices = [
        CellSplit::Diagonal,
        CellSplit::AntiDiagonal,
        CellSplit::Cross,
    ];
    let splits: Vec<CellSplit> = (0..nx * ny).map(|_| choices[rng.gen_range(0..3)]).collect();
    fixtures::planar_grid(nx, ny, &splits)
}

fn planar_triangulations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7131);
    let shapes = [(2, 2), (3, 2), (2, 3), (3, 3)];
    let mut checked = 0;
    let mut crossings = 0;
    for &(nx, ny) in &shapes {
        let gs = random_triangulation(&mut rng, nx, ny);
        let s = &gs.surface;
        ensure!(
            s.faces.iter().all(|f| f.kind == FaceKind::Triangle),
            "fixture is not a triangulation"
        );
        let f_tri = s.faces.len() as i64;
        let interior_edges = s.interior_edges().count() as i64;
        let interior_vertices = s.vertices.iter().filter(|v| v.interior).count() as i64;
        let f_plus = gs
            .crossing_vertices()
            .map_err(|e| e.to_string())?
            .iter()
            .filter(|&&c| c)
            .count() as i64;
        crossings += f_plus;
        for k in 5..=7i64 {
            let formula = (k + 2) * (k + 1) / 2 * f_tri - (2 * k + 1) * interior_edges
                + 3 * interior_vertices
                + f_plus;
            let r = dimension::dim_spline_space(&gs, k as usize, SeparabilityMode::Exact)
                .map_err(|e| e.to_string())?;
            ensure!(
                !r.from_oracle,
                "{nx}x{ny} grid, k = {k} is below the threshold {}",
                r.s_star
            );
            let d = r.dimension as i64;
            let o = oracle(&gs, k as usize)? as i64;
            ensure!(
                d == formula && o == formula,
                "{nx}x{ny} grid, k = {k}: dim {d}, oracle {o}, formula {formula}"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{} random triangulations ({crossings} crossing vertices), {checked} (fixture, degree) pairs exact",
        shapes.len()
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let d = rng.gen_range(0..=max_deg);
    UniPoly::new((0..=d).map(|_| int(rng.gen_range(-4..=4))).collect())
}

/// Coefficient vector of (A, B, C) under fixed degree caps.
fn flatten(t: &[UniPoly; 3], lens: &[usize; 3]) -> Vec<Rational> {
    let mut out = Vec::new();
    for (p, &l) in t.iter().zip(lens) {
        out.extend((0..l).map(|i| p.coeff(i)));
    }
    out
}

/// Nullspace of (A, B, C) -> A a + B b + C c with deg A <= k-1, deg B <= k-F1, deg C <= k-F0,
/// built directly from the polynomial products.
fn brute_syzygies(
    abc: [&UniPoly; 3],
    k: usize,
    kinds: (FaceKind, FaceKind),
) -> ([usize; 3], Vec<Vec<Rational>>) {
    let lens = [k, k + 1 - kinds.1.f_delta(), k + 1 - kinds.0.f_delta()];
    let nv: usize = lens.iter().sum();
    let n = abc.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let mut rows = vec![vec![Rational::zero(); nv]; k + n + 1];
    let mut off = 0;
    for (p, &l) in abc.iter().zip(&lens) {
        for j in 0..l {
            let shifted = &UniPoly::monomial(Rational::one(), j) * *p;
            for (d, x) in shifted.coeffs().iter().enumerate() {
                rows[d][off + j] += x;
            }
        }
        off += l;
    }
    (lens, linalg::nullspace(&rows, nv))
}

fn check_mu_basis(
    mb: &MuBasis,
    abc: [&UniPoly; 3],
    kinds: (FaceKind, FaceKind),
) -> Result<(), String> {
    let x = syzygy::cross(&mb.s1, &mb.s2);
    ensure!(
        x[0] == *abc[0] && x[1] == *abc[1] && x[2] == *abc[2],
        "S1 x S2 = {:?}, input {:?}",
        x,
        abc
    );
    let f_delta = kinds.0.f_delta() + kinds.1.f_delta();
    ensure!(
        (mb.mu + mb.nu) as i64 == (mb.n + 1 + f_delta) as i64 - mb.e as i64 - 2 * mb.m as i64,
        "mu + nu = {} but n + 1 + F_delta - e - 2m = {}",
        mb.mu + mb.nu,
        (mb.n + 1 + f_delta) as i64 - mb.e as i64 - 2 * mb.m as i64
    );
    for k in 1..=8 {
        let (lens, kernel) = brute_syzygies(abc, k, kinds);
        ensure!(
            kernel.len() == mb.dim_zk(k),
            "k = {k}: brute nullity {}, dim Z_k {}",
            kernel.len(),
            mb.dim_zk(k)
        );
        let mut span = IntEchelon::new(lens.iter().sum());
        let (pc, qc) = mb.multiplier_caps(k);
        for (gen, cap) in [(&mb.s1, pc), (&mb.s2, qc)] {
            for j in 0..cap.map_or(0, |c| c + 1) {
                let u = UniPoly::monomial(Rational::one(), j);
                let t = [&u * &gen[0], &u * &gen[1], &u * &gen[2]];
                span.insert_rational(&flatten(&t, &lens));
            }
        }
        for v in &kernel {
            ensure!(
                span.contains_rational(v),
                "k = {k}: a syzygy does not reduce against (S1, S2)"
            );
        }
    }
    Ok(())
}

fn mu_basis_certification() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pairs = [
        (FaceKind::Quad, FaceKind::Quad),
        (FaceKind::Quad, FaceKind::Triangle),
        (FaceKind::Triangle, FaceKind::Quad),
        (FaceKind::Triangle, FaceKind::Triangle),
    ];
    let mut done = 0;
    let mut per_pair = [0usize; 4];
    while done < 100 {
        let pi = done % 4;
        let (a, b, c) = (
            random_poly(&mut rng, 4),
            random_poly(&mut rng, 4),
            random_poly(&mut rng, 4),
        );
        if b.is_zero() || c.is_zero() || a.gcd(&b).gcd(&c).degree() != Some(0) {
            continue;
        }
        let mb =
            syzygy::mu_basis(&a, &b, &c, pairs[pi].0, pairs[pi].1).map_err(|e| e.to_string())?;
        check_mu_basis(&mb, [&a, &b, &c], pairs[pi])
            .map_err(|e| format!("[{a}, {b}, {c}] {:?}: {e}", pairs[pi]))?;
        per_pair[pi] += 1;
        done += 1;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "100 triples ({per_pair:?} per kind pair), k <= 8, {t:.2?}"
    ))
}

/// Size of each vertex family, keyed by vertex key.
fn family_sizes(b: &basis::SplineBasis) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for (t, _) in &b.members {
        if let Some(v) = t.vertex() {
            *m.entry(v.to_string()).or_insert(0) += 1;
        }
    }
    m
}

fn basis_certification() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (name, expected) in [
        ("round-corner", vec![4, 6]),
        ("pruned-octahedron", vec![4, 6]),
    ] {
        let gs = fixtures::by_name(name).unwrap();
        let s_star = dimension::s_star(&gs, SeparabilityMode::Exact).map_err(|e| e.to_string())?;
        for k in s_star..=s_star + 2 {
            let b = basis::full_basis(&gs, k).map_err(|e| format!("{name}, k = {k}: {e}"))?;
            let d = exact(&gs, k)?;
            ensure!(
                b.members.len() == d,
                "{name}, k = {k}: {} functions, dimension {d}",
                b.members.len()
            );
            let r = verify::check_independence(&b);
            ensure!(
                r.rank == r.count,
                "{name}, k = {k}: rank {} of {}",
                r.rank,
                r.count
            );
            for (tag, s) in &b.members {
                ensure!(
                    verify::g1_residual(s, &gs).is_zero(),
                    "{name}, k = {k}: {tag} has a residual"
                );
            }
            let duality = verify::jet_duality_check(&gs, &b);
            ensure!(duality.ok(), "{name}, k = {k}: {:?}", duality.failures);
            let sizes = family_sizes(&b);
            for v in 0..gs.surface.vertices.len() {
                let jets = gs.vertex_jets(v).map_err(|e| e.to_string())?;
                let f = gs.surface.vertices[v].face_count();
                let sum_c = jets.iter().filter(|j| j.crossing).count();
                let c_plus =
                    usize::from(gs.surface.vertices[v].interior && jets.len() == 4 && sum_c == 4);
                let want = 3 + f - sum_c + c_plus;
                let key = basis::vertex_key(&gs.surface, v);
                ensure!(
                    sizes.get(&key) == Some(&want),
                    "{name}, k = {k}: vertex {key} block {:?}, expected {want}",
                    sizes.get(&key)
                );
            }
            let mut distinct: Vec<usize> = sizes.values().copied().collect();
            distinct.sort();
            distinct.dedup();
            ensure!(
                distinct == expected,
                "{name}: vertex block sizes {distinct:?}, expected {expected:?}"
            );
        }
        summary.push(format!("{name} k = {s_star}..{}", s_star + 2));
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{}; blocks 6/4/4 and 4/6, {t:.2?}",
        summary.join(", ")
    ))
}

/// All nonzero coefficients of a spline as (face id, i, j) -> value.
fn support(gs: &GluedSurface, s: &basis::Spline) -> BTreeMap<(String, usize, usize), Rational> {
    let mut m = BTreeMap::new();
    for (f, p) in gs.surface.faces.iter().zip(&s.faces) {
        for (i, j) in f.kind.indices(s.degree) {
            if !p.get(i, j).is_zero() {
                m.insert((f.id.clone(), i, j), p.get(i, j).clone());
            }
        }
    }
    m
}

fn reference_coefficients() -> Outcome {
    let gs = fixtures::round_corner();
    let b = basis::full_basis(&gs, 4).map_err(|e| e.to_string())?;
    let find = |pred: &dyn Fn(&BasisTag) -> bool| -> Vec<&basis::Spline> {
        b.members
            .iter()
            .filter(|(t, _)| pred(t))
            .map(|(_, s)| s)
            .collect()
    };
    let t1 = find(&|t| matches!(t, BasisTag::EdgeFn { edge, .. } if edge == "t1"));
    ensure!(t1.len() == 1, "edge t1 has {} functions", t1.len());
    let sup = support(&gs, t1[0]);
    let x = sup
        .get(&("s1".into(), 2, 1))
        .cloned()
        .unwrap_or_else(Rational::zero);
    ensure!(!x.is_zero(), "edge function has no b_21 term on s1");
    let mut want = BTreeMap::new();
    want.insert(("s1".to_string(), 2, 1), x.clone());
    want.insert(("s3".to_string(), 1, 2), -x.clone());
    ensure!(sup == want, "edge function support {sup:?}");
    let bd = find(&|t| matches!(t, BasisTag::EdgeFn { edge, .. } if edge == "s1#1"));
    let mut got: Vec<_> = bd.iter().map(|s| support(&gs, s)).collect();
    got.sort();
    let unit = |i, j| BTreeMap::from([(("s1".to_string(), i, j), Rational::one())]);
    ensure!(
        got == vec![unit(3, 2), unit(4, 2)],
        "boundary edge functions {got:?}"
    );
    let face = find(&|t| matches!(t, BasisTag::FaceFn { face, .. } if face == "s1"));
    ensure!(
        face.len() == 1 && support(&gs, face[0]) == unit(2, 2),
        "face functions on s1 differ"
    );
    Ok(format!(
        "edge t1 = {x} [b21, 0, -b12]; boundary b32, b42; face b22"
    ))
}

fn separability() -> Outcome {
    let rc = fixtures::round_corner();
    for e in rc.surface.interior_edges() {
        let s =
            dimension::separability(&rc, e, SeparabilityMode::Exact).map_err(|e| e.to_string())?;
        ensure!(
            s == 4,
            "round-corner edge {}: separability {s}",
            rc.surface.edges[e].id
        );
    }
    let oct = fixtures::pruned_octahedron();
    let eb = oct.surface.edge_index("EB").unwrap();
    let s =
        dimension::separability(&oct, eb, SeparabilityMode::Exact).map_err(|e| e.to_string())?;
    ensure!(s == 6, "EB separability {s}");
    let (c0, c1) = dimension::edge_crossings(&oct, eb).map_err(|e| e.to_string())?;
    let target = 10 - usize::from(c0) - usize::from(c1);
    let rank5 = EdgeSpace::new(&oct, eb, 5)
        .map_err(|e| e.to_string())?
        .corner_rank(&oct);
    ensure!(rank5 < target, "EB already separates at degree 5");
    let mut edges = 0;
    for gs in [&rc, &oct] {
        for e in gs.surface.interior_edges() {
            let mb = syzygy::edge_mu_basis(gs, e).map_err(|e| e.to_string())?;
            let ex = dimension::separability(gs, e, SeparabilityMode::Exact)
                .map_err(|e| e.to_string())?;
            let bd = dimension::separability(gs, e, SeparabilityMode::Bound)
                .map_err(|e| e.to_string())?;
            ensure!(
                ex <= bd && bd <= mb.nu + mb.m + 4,
                "edge {}: exact {ex}, bound {bd}",
                gs.surface.edges[e].id
            );
            edges += 1;
        }
    }
    Ok(format!(
        "round-corner 4, EB 6 (rank {rank5} < {target} at 5), {edges} edges within nu+m+4"
    ))
}

fn random_mesh(rng: &mut ChaCha8Rng) -> Result<GluedSurface, GluingError> {
    let choices = [
        CellSplit::Quad,
        CellSplit::Diagonal,
        CellSplit::AntiDiagonal,
        CellSplit::Cross,
    ];
    let (nx, ny) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let splits: Vec<CellSplit> = (0..nx * ny).map(|_| choices[rng.gen_range(0..4)]).collect();
    fixtures::symmetric_grid(nx, ny, &splits)
}

/// Adds `delta` to the middle Bernstein coefficient of `a` in degree max(deg a, 2); endpoint
/// values stay fixed, endpoint derivatives move.
fn perturb_a(a: &UniPoly, delta: &Rational) -> UniPoly {
    let n = a.degree().unwrap_or(0).max(2);
    let mut bern = a.to_bernstein(n).expect("degree fits");
    bern[1] += delta;
    UniPoly::from_bernstein(&bern)
}

fn symmetric_gluing_property() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6108);
    let mut detected = 0;
    let mut crossing_total = 0;
    for mesh in 0..20 {
        let gs = random_mesh(&mut rng).map_err(|e| format!("mesh {mesh}: {e}"))?;
        for v in 0..gs.surface.vertices.len() {
            gluing::check_vertex_compatibility(&gs, v).map_err(|e| format!("mesh {mesh}: {e}"))?;
        }
        let findings = gluing::check_topology(&gs, false).map_err(|e| e.to_string())?;
        ensure!(
            findings.iter().all(|f| f.level != Level::Fail),
            "mesh {mesh}: topology failure {:?}",
            findings.iter().find(|f| f.level == Level::Fail)
        );
        for (v, crossing) in gs
            .crossing_vertices()
            .map_err(|e| e.to_string())?
            .into_iter()
            .enumerate()
        {
            if !crossing {
                continue;
            }
            crossing_total += 1;
            let fe = gs.surface.fan_edges(v)[0];
            let mut bad = gs.clone();
            let g = bad.gluings[fe.edge].as_mut().expect("interior edge");
            g.a = perturb_a(&g.a, &Rational::new(1.into(), 7.into()));
            match gluing::check_vertex_compatibility(&bad, v) {
                Err(GluingError::Condition2Violated { .. }) => detected += 1,
                other => {
                    return Err(format!(
                        "mesh {mesh}: perturbation at crossing vertex gave {other:?}"
                    ))
                }
            }
        }
    }
    ensure!(crossing_total > 0, "no crossing vertices generated");
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "20 meshes pass; {detected}/{crossing_total} perturbations detected, {t:.2?}"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("round corner dimension 48", round_corner),
        ("pruned octahedron (2k-3)^2+k-4", pruned_octahedron),
        ("planar triangulations", planar_triangulations),
        ("mu-basis certification", mu_basis_certification),
        ("basis certification", basis_certification),
        ("round-corner coefficients", reference_coefficients),
        ("separability", separability),
        ("symmetric gluing properties", symmetric_gluing_property),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
