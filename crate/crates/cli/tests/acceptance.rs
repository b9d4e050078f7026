//! Acceptance suite: one PASS/FAIL line per criterion, with the wall-clock
//! limit each criterion must meet. All comparisons are exact.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use pdfill_core::complex::{fox_derivative, ChainComplex};
use pdfill_core::filling::{
    isoperimetric_sweep, minimal_filling, transfer_constant, CayleyBallComplex, FillingOptions, SweepConfig,
    TransferPair,
};
use pdfill_core::folner::{cube_words, folner_boundary, folner_sweep, verify_support_bound, Family};
use pdfill_core::group_ring::{Character, GroupRingElement, GroupRingMatrix};
use pdfill_core::groups::{make_group, Group, GroupSpec};
use pdfill_core::hyperbolicity::{slimness_sweep, SlimConstants, SlimnessConfig, TriangleSample};
use pdfill_core::ring::{RingDescriptor, RingValue};
use pdfill_core::word::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COMPLEX_GROUPS: [&str; 10] = [
    "F2", "Z^2", "Sigma2", "Klein", "T11a:1", "T11a:2", "T11a:3", "T11b:2", "T11b:3", "T11b:4",
];
const RINGS: [&str; 4] = ["Z", "Q", "Z/2", "Z/5"];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn group(spec: &str) -> Arc<Group> {
    make_group(&spec.parse::<GroupSpec>().unwrap()).unwrap()
}

fn ring(s: &str) -> RingDescriptor {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_word(rng: &mut ChaCha8Rng, m: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..m), rng.gen())))
}

fn random_coeff(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> RingValue {
    match ring {
        RingDescriptor::Quaternions => RingValue::Quat([0; 4].map(|_| rng.gen_range(-2..=2))),
        _ => ring.from_int(rng.gen_range(-3..=3)),
    }
}

fn random_element(rng: &mut ChaCha8Rng, g: &Arc<Group>, ring: RingDescriptor) -> GroupRingElement {
    let terms: Vec<_> = (0..rng.gen_range(0..=5))
        .map(|_| (random_word(rng, g.generator_count(), 6), random_coeff(rng, ring)))
        .collect();
    GroupRingElement::from_terms(ring, g.clone(), terms).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, g: &Arc<Group>, ring: RingDescriptor, n: usize) -> GroupRingMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_element(rng, g, ring)).collect())
        .collect();
    GroupRingMatrix::from_rows(ring, g.clone(), rows, n).unwrap()
}

/// Every character with values ±1 that respects the relators.
fn sign_characters(g: &Group, ring: RingDescriptor) -> Vec<Character> {
    let m = g.generator_count();
    (0..1u32 << m)
        .filter_map(|mask| {
            let values = (0..m)
                .map(|i| ring.from_int(if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect();
            let rho = Character::new(ring, values).ok()?;
            rho.validate(g.presentation()).unwrap().then_some(rho)
        })
        .collect()
}

fn c1_chain_complexes() -> Outcome {
    let mut checked = 0;
    for spec in COMPLEX_GROUPS {
        let g = group(spec);
        for r in RINGS {
            let r = ring(r);
            let c = ChainComplex::presentation_complex(&g, r).map_err(|e| e.to_string())?;
            let mut derived = vec![c.clone(), c.dualize()];
            for rho in sign_characters(&g, r) {
                let t = c.twist(&rho).map_err(|e| e.to_string())?;
                derived.push(t.dualize());
                derived.push(t);
                derived.push(c.dualize().twist(&rho).map_err(|e| e.to_string())?);
            }
            for d in &derived {
                for k in 2..=d.dimension() {
                    ensure(d.composite(k).unwrap().is_zero(), || {
                        format!("{spec} over {r}: composite {k} nonzero")
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} complexes (presentation, dual, ±1-twisted)"))
}

fn c2_fox_identity() -> Outcome {
    let r = RingDescriptor::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in COMPLEX_GROUPS {
        let g = group(spec);
        let one = GroupRingElement::one(r, g.clone());
        let gens_minus_one: Vec<_> = (0..g.generator_count())
            .map(|s| {
                GroupRingElement::monomial(r, g.clone(), &Word(vec![Letter::pos(s)]), r.one())
                    .sub(&one)
                    .unwrap()
            })
            .collect();
        for _ in 0..1000 {
            let w = random_word(&mut rng, g.generator_count(), 20);
            let mut sum = GroupRingElement::zero(r, g.clone());
            for (s, t) in gens_minus_one.iter().enumerate() {
                sum = sum.add(&fox_derivative(&w, s, r, &g).unwrap().mul(t).unwrap()).unwrap();
            }
            let lhs = GroupRingElement::monomial(r, g.clone(), &w, r.one()).sub(&one).unwrap();
            ensure(sum == lhs, || format!("{spec}: identity fails for {w}"))?;
        }
    }
    Ok(format!("1000 words x {} presentations", COMPLEX_GROUPS.len()))
}

fn c3_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (spec, r) in [
        ("Sigma2", RingDescriptor::Quaternions),
        ("Klein", RingDescriptor::IntegersMod(5)),
    ] {
        let g = group(spec);
        for _ in 0..1000 {
            let x = random_element(&mut rng, &g, r);
            let y = random_element(&mut rng, &g, r);
            ensure(x.involute().involute() == x, || format!("(x*)* != x for {x}"))?;
            ensure(
                x.mul(&y).unwrap().involute() == y.involute().mul(&x.involute()).unwrap(),
                || format!("(xy)* != y*x* for x = {x}, y = {y}"),
            )?;
        }
    }
    let g = group("Klein");
    for _ in 0..100 {
        let a = random_matrix(&mut rng, &g, RingDescriptor::Quaternions, 3);
        let b = random_matrix(&mut rng, &g, RingDescriptor::Quaternions, 3);
        ensure(a.conjugate_transpose().conjugate_transpose() == a, || {
            "(A†)† != A".into()
        })?;
        let lhs = a.mul(&b).unwrap().conjugate_transpose();
        let rhs = b.conjugate_transpose().mul(&a.conjugate_transpose()).unwrap();
        ensure(lhs == rhs, || "(AB)† != B†A†".into())?;
    }
    Ok("2x1000 element pairs (H on Sigma2, Z/5 on Klein), 100 3x3 matrix pairs over H".into())
}

fn c4_klein_twist() -> Outcome {
    let g = group("Klein");
    let z = RingDescriptor::Integers;
    let d1 = ChainComplex::presentation_complex(&g, z)
        .unwrap()
        .differential(1)
        .clone();
    let rho = Character::parse("a:-1,b:1", z, 2).unwrap();
    let expected = GroupRingMatrix::parse_rows(&[vec!["1 + a".into()], vec!["1 - b".into()]], 1, z, g.clone()).unwrap();
    let twisted = d1.twist(&rho).unwrap();
    ensure(twisted == expected, || {
        format!("twisted column is {:?}", twisted.to_text_rows())
    })?;
    let trivial = Character::trivial(z, 2);
    ensure(d1.twist(&trivial).unwrap() == d1, || {
        "trivial twist changed the differential".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let z5 = RingDescriptor::IntegersMod(5);
    let rho5 = Character::parse("a:-1,b:2", z5, 2).unwrap();
    ensure(rho5.validate(g.presentation()).unwrap(), || {
        "a:-1,b:2 should be a character of Klein mod 5".into()
    })?;
    for (r, rho) in [(z, &rho), (z, &trivial), (z5, &rho5)] {
        for _ in 0..1000 {
            let x = random_element(&mut rng, &g, r);
            ensure(x.twist(rho).unwrap().twist(&rho.inverse()).unwrap() == x, || {
                format!("round trip fails on {x}")
            })?;
            if std::ptr::eq(rho, &trivial) {
                ensure(x.twist(rho).unwrap() == x, || format!("trivial twist moved {x}"))?;
            }
        }
    }
    Ok("(1-a, 1-b) -> (1+a, 1-b); 3x1000 round trips".into())
}

/// Minimal support of a {-1,0,1} face vector filling the side-n square in
/// the lattice window |x| + |y| <= radius, found by exhausting all vectors.
fn brute_force_square(radius: i64, n: i64, base: (i64, i64)) -> (usize, Option<usize>) {
    let inside = |x: i64, y: i64| x.abs() + y.abs() <= radius;
    let mut faces = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            if inside(x, y) && inside(x + 1, y) && inside(x + 1, y + 1) && inside(x, y + 1) {
                faces.push((x, y));
            }
        }
    }
    // edges keyed by (start point, direction)
    let mut edge_ids: HashMap<(i64, i64, u8), usize> = HashMap::new();
    fn edge(ids: &mut HashMap<(i64, i64, u8), usize>, x: i64, y: i64, d: u8) -> usize {
        let next = ids.len();
        *ids.entry((x, y, d)).or_insert(next)
    }
    let ids = &mut edge_ids;
    let face_edges: Vec<[(usize, i64); 4]> = faces
        .iter()
        .map(|&(x, y)| {
            [
                (edge(ids, x, y, 0), 1),
                (edge(ids, x + 1, y, 1), 1),
                (edge(ids, x, y + 1, 0), -1),
                (edge(ids, x, y, 1), -1),
            ]
        })
        .collect();
    let (bx, by) = base;
    let mut sides = Vec::new();
    for i in 0..n {
        sides.push((edge(ids, bx + i, by, 0), 1));
        sides.push((edge(ids, bx + n, by + i, 1), 1));
        sides.push((edge(ids, bx + i, by + n, 0), -1));
        sides.push((edge(ids, bx, by + i, 1), -1));
    }
    let mut target = vec![0i64; ids.len()];
    for (e, s) in sides {
        target[e] += s;
    }
    let mut coeffs = vec![-1i64; faces.len()];
    let mut best: Option<usize> = None;
    loop {
        let mut boundary = vec![0i64; target.len()];
        for (f, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for &(e, s) in &face_edges[f] {
                    boundary[e] += c * s;
                }
            }
        }
        if boundary == target {
            let support = coeffs.iter().filter(|&&c| c != 0).count();
            best = Some(best.map_or(support, |b| b.min(support)));
        }
        let mut i = 0;
        while i < coeffs.len() && coeffs[i] == 1 {
            coeffs[i] = -1;
            i += 1;
        }
        if i == coeffs.len() {
            break;
        }
        coeffs[i] += 1;
    }
    (faces.len(), best)
}

fn square_word(n: usize) -> (Word, Word) {
    let k = n / 2;
    let w = Word::parse(&format!("a^{n}b^{n}a^-{n}b^-{n}"), 2).unwrap();
    let base = Word::parse(&format!("a^-{k}b^-{k}"), 2).unwrap();
    (base, w)
}

fn c5_square_fillings() -> Outcome {
    let g = group("Z^2");
    let z = RingDescriptor::Integers;
    let mut detail = Vec::new();
    for n in 1..=3usize {
        let radius = if n == 3 { 4 } else { 3 };
        let x = CayleyBallComplex::build(&g, radius, z, 100_000).unwrap();
        let (base, w) = square_word(n);
        let cycle = x.word_cycle_at(&base, &w).map_err(|e| e.to_string())?;
        let r = minimal_filling(&x, &cycle, 1, &FillingOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.optimal && r.filler_norm == n * n, || {
            format!("n = {n}: filler {} (optimal = {})", r.filler_norm, r.optimal)
        })?;
        if n <= 2 {
            let k = (n / 2) as i64;
            let (faces, brute) = brute_force_square(radius as i64, n as i64, (-k, -k));
            ensure(faces == x.face_count(), || {
                format!("window has {faces} faces, complex has {}", x.face_count())
            })?;
            ensure(brute == Some(n * n), || format!("n = {n}: brute force found {brute:?}"))?;
            detail.push(format!(
                "n={n}: {} (brute force {} over 3^{faces})",
                r.filler_norm,
                n * n
            ));
        } else {
            detail.push(format!("n={n}: {}", r.filler_norm));
        }
    }
    Ok(detail.join(", "))
}

fn sweep(spec: &str, radius: usize, cap: usize) -> Ratio<i64> {
    let config = SweepConfig {
        radius,
        word_length_cap: cap,
        coeff_bound: 1,
        ring: RingDescriptor::Integers,
        max_elements: 1_000_000,
        filling: FillingOptions::default(),
    };
    isoperimetric_sweep(&group(spec), &config).unwrap().max_ratio
}

fn c6_dichotomy() -> Outcome {
    let z2: Vec<_> = [4, 8, 12].iter().map(|&c| sweep("Z^2", 4, c)).collect();
    let expected = [Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(3, 4)];
    ensure(z2 == expected, || format!("Z^2 maxima {z2:?}"))?;
    let s = sweep("Sigma2", 5, 8);
    ensure(s <= Ratio::new(1, 8) && s > Ratio::from_integer(0), || {
        format!("Sigma2 max {s}")
    })?;
    Ok(format!("Z^2: {} -> {} -> {}; Sigma2: {s}", z2[0], z2[1], z2[2]))
}

fn c7_folner() -> Outcome {
    let z2 = group("Z^2");
    for n in 2..=20 {
        let b = folner_boundary(&z2, &cube_words(2, n)).len();
        ensure(b == 2 * n - 1, || format!("box {n}: |B| = {b}"))?;
    }
    for spec in COMPLEX_GROUPS {
        for r in [RingDescriptor::Integers, RingDescriptor::IntegersMod(2)] {
            let rep = verify_support_bound(&group(spec), r, 1000, 2, Ratio::from_integer(0), None, 7)
                .map_err(|e| e.to_string())?;
            ensure(rep.inclusion_failures == 0, || {
                format!("{spec} over {r}: {} failures", rep.inclusion_failures)
            })?;
        }
    }
    let rep =
        folner_sweep(&group("F2"), Family::Connected(10), Ratio::new(1, 5), 1_000_000).map_err(|e| e.to_string())?;
    let eps = rep.epsilon_hat;
    let kappa = rep.kappa_hat.ok_or("no kappa")?;
    ensure(eps > Ratio::from_integer(0) && kappa == eps.recip(), || {
        format!("eps {eps}, kappa {kappa}")
    })?;
    Ok(format!(
        "boxes 2..20 ok; inclusion on 1000 d x 10 groups x {{Z, Z/2}}; F2 connected<=10: {} sets, eps {eps}, kappa {kappa}",
        rep.sets_examined
    ))
}

fn delta(spec: &str, radius: usize) -> usize {
    let config = SlimnessConfig {
        radius,
        sample: TriangleSample::default(),
        exhaustive: false,
        max_elements: 1_000_000,
    };
    slimness_sweep(&group(spec), &config).unwrap().delta_hat
}

fn c8_hyperbolicity() -> Outcome {
    for r in 1..=6 {
        let d = delta("F2", r);
        ensure(d == 0, || format!("F2 radius {r}: delta {d}"))?;
    }
    let (z2, z4) = (delta("Z^2", 2), delta("Z^2", 4));
    ensure(z2 < z4, || format!("Z^2: {z2} vs {z4}"))?;
    let (s2, s3) = (delta("Sigma2", 2), delta("Sigma2", 3));
    ensure(s2 == s3, || format!("Sigma2: {s2} vs {s3}"))?;
    Ok(format!("F2 0 for r<=6; Z^2 {z2} < {z4}; Sigma2 {s2} = {s3}"))
}

fn c9_constants() -> Outcome {
    let c = SlimConstants::for_presentation(group("Sigma2").presentation(), 1).map_err(|e| e.to_string())?;
    ensure((c.n, c.k, c.m) == (8, 65, 8), || format!("{c:?}"))?;
    ensure(c.k == c.kappa * c.n * c.n + 1 && c.m == c.kappa * c.n, || {
        "defining equations fail".into()
    })?;
    Ok(format!("N = {}, k = {}, m = {}", c.n, c.k, c.m))
}

fn c10_euler_homology() -> Outcome {
    let q = RingDescriptor::Rationals;
    let data = |spec: &str| {
        let c = ChainComplex::presentation_complex(&group(spec), RingDescriptor::Integers).unwrap();
        (c.euler_characteristic(), c.homology_trivial_coeffs(q).unwrap())
    };
    let (chi, h) = data("Klein");
    ensure(chi == 0 && h[1] >= 1, || format!("Klein: chi {chi}, H {h:?}"))?;
    let (chi, h) = data("Sigma2");
    ensure(chi == -2 && h[1] == 4, || format!("Sigma2: chi {chi}, H {h:?}"))?;
    let all = [
        "F1", "F2", "F3", "Z^1", "Z^2", "Z^3", "Sigma2", "Sigma3", "Klein", "T11a:1", "T11a:2", "T11a:3", "T11b:2",
        "T11b:3", "T11b:4", "C5", "Trivial",
    ];
    for spec in all {
        let (chi, h) = data(spec);
        let alt: i64 = h
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        ensure(alt == chi, || format!("{spec}: chi {chi}, H {h:?}"))?;
    }
    Ok(format!(
        "Klein chi 0, Sigma2 chi -2 / H1 4; alternating sums match on {} complexes",
        all.len()
    ))
}

fn c11_transfer() -> Outcome {
    let c = transfer_constant(Ratio::from_integer(2), 3, 1, 4).map_err(|e| e.to_string())?;
    ensure(c == Ratio::from_integer(10), || format!("constant {c}"))?;
    let pair = TransferPair::z2_swap().map_err(|e| e.to_string())?;
    ensure(pair.verify().map_err(|e| e.to_string())?, || {
        "chain maps or homotopy fail".into()
    })?;
    let check = pair.check(100, 11).map_err(|e| e.to_string())?;
    ensure(check.boundary_failures == 0 && check.violations == 0, || {
        format!(
            "{} boundary failures, {} violations",
            check.boundary_failures, check.violations
        )
    })?;
    Ok(format!(
        "constant 10; 100 samples within (kappa|X||Z| + |H|)|gamma| = {}|gamma|",
        check.constant
    ))
}

fn c12_determinism() -> Outcome {
    let commands: [&[&str]; 12] = [
        &["complex", "Sigma2", "Z", "--euler", "--homology", "Q"],
        &["complex", "Klein", "Z", "--dualize", "--twist", "a:-1,b:1"],
        &["fill", "Z^2", "Z", "--radius", "4", "--max-word", "8"],
        &[
            "fill",
            "Z^2",
            "Z",
            "--radius",
            "4",
            "--max-word",
            "10",
            "--csv",
            "--threads",
            "4",
        ],
        &["fill", "Sigma2", "Z", "--radius", "4", "--max-word", "8"],
        &["folner", "F2", "--family", "connected:8"],
        &["folner", "Klein", "--family", "balls:6", "--csv"],
        &["slim", "Sigma2", "--radius", "4", "--seed", "7", "--threads", "4"],
        &["slim", "Z^2", "--radius", "4", "--csv"],
        &["constants", "Sigma2", "--kappa", "1"],
        &["transfer", "--samples", "20", "--seed", "3"],
        &["transfer", "--samples", "20", "--seed", "3", "--threads", "3"],
    ];
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_pdfill"))
            .args(args)
            .env_remove("PDFILL_BUDGET")
            .output()
            .unwrap()
    };
    for args in commands {
        let (a, b) = (run(args), run(args));
        ensure(a.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{args:?} differs between runs")
        })?;
    }
    // thread count must not change the result
    let one = run(&["fill", "Z^2", "Z", "--radius", "4", "--max-word", "10"]);
    let four = run(&[
        "fill",
        "Z^2",
        "Z",
        "--radius",
        "4",
        "--max-word",
        "10",
        "--threads",
        "4",
    ]);
    ensure(one.stdout == four.stdout, || "fill output depends on --threads".into())?;
    Ok(format!("{} commands byte-identical across runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "chain-complex soundness", 5, c1_chain_complexes),
        (2, "Fox fundamental formula", 10, c2_fox_identity),
        (3, "involution laws", 5, c3_involution),
        (4, "twist formula", 1, c4_klein_twist),
        (5, "filling exactness and optimality", 60, c5_square_fillings),
        (6, "isoperimetric dichotomy", 120, c6_dichotomy),
        (7, "Følner boundaries", 120, c7_folner),
        (8, "hyperbolicity probes", 300, c8_hyperbolicity),
        (9, "slim-triangle constants", 1, c9_constants),
        (10, "Euler characteristic and homology", 5, c10_euler_homology),
        (11, "transfer constant", 30, c11_transfer),
        (12, "CLI determinism", 60, c12_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(limit) => Err(format!("too slow; {d}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!(
            "{tag} {id:>2} {name} [{:.2}s / {limit}s]: {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
