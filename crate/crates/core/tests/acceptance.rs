//! Acceptance run: one PASS/FAIL line per criterion. Every comparison is an
//! exact integer or rational equality; the wall-clock limits below are the
//! only tolerances.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jetcalc_core::invariants::{
    alpha_pq, beta_m, beta_monomial, beta_monomial_limit, contact_codim, contact_codim_bruteforce,
    homog_fiber_dims, jet_dimension, lci_jet_check, lct_diagonal, lct_estimate,
    lct_from_resolution, mld_estimate, mld_from_resolution, monotonicity_check, prop54_check,
    sandwich_stats, Certificate, DimensionSequence, Divisor, ExtRational, ResolutionData,
    SequenceEntry,
};
use jetcalc_core::jetgen::{generate_jet_equations, truncation_substitution};
use jetcalc_core::localalgebra::{small_monomial_algebras, AlgebraSurjection};
use jetcalc_core::polyring::Monomial;
use jetcalc_core::{Context, FieldSpec, IdealPresentation, LocalAlgebra, PolyRing, Polynomial};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6a65_7473;

const LIMIT_SMOOTH: Duration = Duration::from_secs(5);
const LIMIT_CUSP: Duration = Duration::from_secs(120);
const LIMIT_CONTACT: Duration = Duration::from_secs(60);
const LIMIT_ITERATED: Duration = Duration::from_secs(60);
const LIMIT_COHERENCE: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ideal(vars: &[&str], gens: &[&str]) -> IdealPresentation {
    IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, gens).unwrap()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn smooth_benchmark(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let mut algebras: Vec<LocalAlgebra> = (0..=4).map(LocalAlgebra::truncation).collect();
    algebras.push(LocalAlgebra::box_algebra(2, 2).map_err(err)?);
    algebras.push(LocalAlgebra::box_algebra(2, 3).map_err(err)?);
    algebras.push(LocalAlgebra::fat_point(2, 3).map_err(err)?);
    let mut count = 0;
    for vars in [&["x"][..], &["x", "y"][..]] {
        let space =
            IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, &[]).map_err(err)?;
        for a in &algebras {
            let d = jet_dimension(ctx, &space, a).map_err(err)?;
            expect(
                &format!("dim J_{a}(A^{})", vars.len()),
                d,
                (vars.len() * a.dim()) as i64,
            )?;
            count += 1;
        }
    }
    within(start, LIMIT_SMOOTH)?;
    Ok(format!("{count} cases"))
}

fn cusp_three_ways(ctx: &Context) -> Outcome {
    let start = Instant::now();
    expect(
        "lct_diagonal(2,3)",
        lct_diagonal(&[2, 3]).map_err(err)?,
        q(5, 6),
    )?;
    expect(
        "lct_from_resolution(cusp)",
        lct_from_resolution(&ResolutionData::cusp()).map_err(err)?,
        q(5, 6),
    )?;
    let e = lct_estimate(ctx, &ideal(&["x", "y"], &["x^2 + y^3"]), 5).map_err(err)?;
    expect("dim J_5", e.sequence.get(5).map(|s| s.dim), Some(7))?;
    expect("lct estimate", e.lct.clone(), ExtRational::Finite(q(5, 6)))?;
    within(start, LIMIT_CUSP)?;
    expect(
        "certificate",
        e.certificate.clone(),
        Some(Certificate::Repetition { m: 2, m2: 5 }),
    )
    .map_err(|msg| {
        let normalized: Vec<String> = e
            .sequence
            .entries
            .iter()
            .map(|s| format!("{}", s.normalized))
            .collect();
        format!("{msg}; normalized values {}", normalized.join(", "))
    })?;
    Ok("5/6 three ways".into())
}

fn random_resolution(rng: &mut ChaCha8Rng) -> ResolutionData {
    let r = rng.gen_range(1..=5);
    let divisors: Vec<Divisor> = (0..r)
        .map(|i| Divisor {
            id: format!("E{i}"),
            a: rng.gen_range(0..=6),
            k: rng.gen_range(0..=5),
            center_in_z: true,
        })
        .collect();
    let mut faces = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let top: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.5)).collect();
        for mask in 1u32..(1 << top.len()) {
            faces.push(
                (0..top.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| format!("E{}", top[b]))
                    .collect::<Vec<_>>(),
            );
        }
    }
    ResolutionData::new(2, divisors, &faces).unwrap()
}

fn contact_oracle(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for case in 0..200 {
        let data = random_resolution(&mut rng);
        let m = rng.gen_range(1..=40);
        let dp = contact_codim(&data, m).map_err(err)?;
        let brute = contact_codim_bruteforce(&data, m).map_err(err)?;
        expect(&format!("instance {case} (m = {m})"), dp, brute)?;
    }
    let cusp = ideal(&["x", "y"], &["x^2 + y^3"]);
    let data = ResolutionData::cusp();
    for m in 1..=6u32 {
        let jets = jet_dimension(ctx, &cusp, &LocalAlgebra::truncation(m - 1)).map_err(err)?;
        let codim = contact_codim(&data, m as u64).map_err(err)?;
        expect(
            &format!("codim Cont^>={m}"),
            codim.map(|c| c as i64),
            Some(2 * m as i64 - jets),
        )?;
    }
    within(start, LIMIT_CONTACT)?;
    Ok("200 random instances, cusp m = 1..6".into())
}

fn iterated_jets(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let node = ideal(&["x", "y"], &["x*y"]);
    let direct =
        jet_dimension(ctx, &node, &LocalAlgebra::box_algebra(2, 2).map_err(err)?).map_err(err)?;
    let dual = LocalAlgebra::truncation(1);
    let first = generate_jet_equations(&node, &dual)
        .map_err(err)?
        .to_ideal();
    let second = generate_jet_equations(&first, &dual)
        .map_err(err)?
        .to_ideal();
    let staged = ctx.ideal_dimension(&second).map_err(err)?.dimension;
    expect("direct", direct, 5)?;
    expect("jet of jet", staged, 5)?;
    within(start, LIMIT_ITERATED)?;
    Ok("both 5".into())
}

fn beta_cross_check(ctx: &Context) -> Outcome {
    let node = ideal(&["x", "y"], &["x*y"]);
    expect("beta_2(V(xy))", beta_m(ctx, &node, 2).map_err(err)?, 4)?;
    expect(
        "beta_monomial((1,1), 2)",
        beta_monomial(&[1, 1], 2).map_err(err)?,
        4,
    )?;
    expect(
        "limit (1,1)",
        beta_monomial_limit(&[1, 1]).map_err(err)?,
        q(3, 2),
    )?;
    expect(
        "limit (1,2)",
        beta_monomial_limit(&[1, 2]).map_err(err)?,
        q(9, 5),
    )?;
    for (exps, gen) in [([1, 1], "x*y"), ([1, 2], "x*y^2")] {
        let i = ideal(&["x", "y"], &[gen]);
        for m in 1..=3 {
            expect(
                &format!("beta_{m}({gen})"),
                beta_m(ctx, &i, m).map_err(err)?,
                beta_monomial(&exps, m).map_err(err)?,
            )?;
        }
    }
    Ok("Groebner = stratification".into())
}

fn sequence(ctx: &Context, i: &IdealPresentation, m_max: u32) -> Result<DimensionSequence, String> {
    let entries = (0..=m_max)
        .map(|m| {
            jet_dimension(ctx, i, &LocalAlgebra::truncation(m))
                .map(|d| SequenceEntry::new(m, d))
                .map_err(err)
        })
        .collect::<Result<_, _>>()?;
    Ok(DimensionSequence {
        ambient_dim: i.nvars(),
        entries,
    })
}

fn monotonicity(ctx: &Context) -> Outcome {
    let cusp = sequence(ctx, &ideal(&["x", "y"], &["x^2 + y^3"]), 5)?;
    let node = sequence(ctx, &ideal(&["x", "y"], &["x*y"]), 5)?;
    expect("cusp", monotonicity_check(&cusp), true)?;
    expect("node", monotonicity_check(&node), true)?;
    let mut mutated = cusp.clone();
    mutated.entries[1] = SequenceEntry::new(1, 3);
    expect("mutated cusp", monotonicity_check(&mutated), false)?;
    Ok("cusp and node monotone, mutation caught".into())
}

fn random_ideal(rng: &mut ChaCha8Rng) -> IdealPresentation {
    let n = rng.gen_range(1..=2);
    let ring = PolyRing::new(["x", "y"][..n].iter().copied(), FieldSpec::RATIONALS).unwrap();
    let gens = (0..rng.gen_range(1..=2))
        .map(|_| {
            let terms: Vec<(Monomial, BigRational)> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let d = rng.gen_range(0..=3u32);
                    let a = rng.gen_range(0..=d);
                    let e = if n == 1 { vec![d] } else { vec![a, d - a] };
                    (Monomial::new(e), q(rng.gen_range(-5..=5), 1))
                })
                .collect();
            Polynomial::from_terms(&ring, terms)
        })
        .collect();
    IdealPresentation::new(&ring, gens).unwrap()
}

fn algebra_pool(max_dim: usize) -> Vec<LocalAlgebra> {
    let mut pool = small_monomial_algebras(1, max_dim as u32, max_dim);
    pool.extend(small_monomial_algebras(2, max_dim as u32, max_dim));
    pool.extend(small_monomial_algebras(3, 3, max_dim));
    pool
}

fn quasi_homogeneity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let pool = algebra_pool(6);
    for case in 0..100 {
        let i = random_ideal(&mut rng);
        let a = &pool[rng.gen_range(0..pool.len())];
        let jets = generate_jet_equations(&i, a).map_err(err)?;
        let mut names = jets.ring().vars().to_vec();
        names.push("lambda".into());
        let big = PolyRing::new(names, FieldSpec::RATIONALS).map_err(err)?;
        let lambda = Polynomial::var(&big, big.nvars() - 1);
        let images: Vec<Polynomial> = (0..jets.ring().nvars())
            .map(|v| &Polynomial::var(&big, v) * &lambda.pow(jets.weights()[v]))
            .collect();
        let embed: Vec<usize> = (0..jets.ring().nvars()).collect();
        for alpha in 0..i.generators().len() {
            for (k, &d) in a.degrees().iter().enumerate() {
                let p = jets.equation(alpha, k);
                let scaled = p.substitute_all(&images).map_err(err)?;
                let want = &p.rename_into(&big, &embed).map_err(err)? * &lambda.pow(d);
                if scaled != want {
                    return Err(format!(
                        "case {case}: P_{alpha}^({k}) over {a} is not of weight {d}"
                    ));
                }
            }
        }
    }
    Ok("100 random ideals".into())
}

fn equation_count() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let pool = algebra_pool(8);
    let mut ideals: Vec<IdealPresentation> = (0..4).map(|_| random_ideal(&mut rng)).collect();
    ideals.push(ideal(&["x", "y"], &["x^2 - y^3", "x*y + y"]));
    let (mut generated, mut restrictions) = (0, 0);
    for i in &ideals {
        let systems = pool
            .iter()
            .map(|a| generate_jet_equations(i, a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        for (a, js) in pool.iter().zip(&systems) {
            expect(
                &format!("equations over {a}"),
                js.equations().len(),
                i.generators().len() * a.dim(),
            )?;
            generated += 1;
        }
        for (src, js) in pool.iter().zip(&systems) {
            for (tgt, jt) in pool.iter().zip(&systems) {
                if src.num_generators() != tgt.num_generators() {
                    continue;
                }
                let Ok(sigma) = AlgebraSurjection::new(src, tgt) else {
                    continue;
                };
                let proj = truncation_substitution(js, &sigma).map_err(err)?;
                if proj.restricted_equations(js).as_deref() != Some(jt.equations()) {
                    return Err(format!("restriction {src} -> {tgt} differs"));
                }
                restrictions += 1;
            }
        }
    }
    Ok(format!("{generated} systems, {restrictions} surjections"))
}

fn mld_agreement(ctx: &Context) -> Outcome {
    let line = ideal(&["x", "y"], &["x"]);
    let origin = ideal(&["x", "y"], &["x", "y"]);
    let blowup = ResolutionData::new(
        2,
        vec![Divisor {
            id: "E".into(),
            a: 1,
            k: 1,
            center_in_z: true,
        }],
        &[],
    )
    .map_err(err)?;
    let e = mld_estimate(ctx, &line, &origin, &q(1, 1), 4).map_err(err)?;
    let values: Vec<Option<BigRational>> = e.terms.iter().map(|t| t.value.clone()).collect();
    expect("v_m at q = 1", values, vec![Some(q(1, 1)); 5])?;
    expect("estimate at q = 1", e.mld, ExtRational::from_int(1))?;
    expect(
        "resolution at q = 1",
        mld_from_resolution(&blowup, &q(1, 1)).map_err(err)?,
        ExtRational::from_int(1),
    )?;
    let e = mld_estimate(ctx, &line, &origin, &q(3, 1), 4).map_err(err)?;
    expect("estimate at q = 3", e.mld, ExtRational::NegInfinity)?;
    expect(
        "resolution at q = 3",
        mld_from_resolution(&blowup, &q(3, 1)).map_err(err)?,
        ExtRational::NegInfinity,
    )?;
    Ok("1 and -inf both ways".into())
}

fn coherence(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let p = prop54_check(2, 2, 2, 8).map_err(err)?;
    expect("limit d^r", p.limit.clone(), q(4, 1))?;
    expect("n = 2 flagged", p.not_pure_dimensional, true)?;
    let node = ideal(&["x", "y"], &["x*y"]);
    let alpha = alpha_pq(ctx, &node, 2, 2).map_err(err)?;
    expect("alpha_22(V(xy))", alpha, 5)?;
    if BigRational::from_integer(alpha.into()) <= p.limit {
        return Err("alpha_22 does not exceed d^r".into());
    }
    let h = homog_fiber_dims(2, 2, 3).map_err(err)?;
    for m in 0..=3u32 {
        let d = jet_dimension(ctx, &node, &LocalAlgebra::truncation(m)).map_err(err)?;
        expect(&format!("D_{m} for n = 2"), h.dims[m as usize], d)?;
    }
    let cone = ideal(&["x", "y", "z"], &["x^2 + y^2 + z^2"]);
    let h = homog_fiber_dims(3, 2, 2).map_err(err)?;
    for m in 0..=2u32 {
        let d = jet_dimension(ctx, &cone, &LocalAlgebra::truncation(m)).map_err(err)?;
        expect(&format!("D_{m} for n = 3"), h.dims[m as usize], d)?;
    }
    within(start, LIMIT_COHERENCE)?;
    Ok("limit 4 < alpha_22 = 5, recursions match".into())
}

fn lci_verdicts(ctx: &Context) -> Outcome {
    let dual = LocalAlgebra::truncation(1);
    let node = lci_jet_check(ctx, &ideal(&["x", "y"], &["x*y"]), 1, &dual).map_err(err)?;
    expect("V(xy) pure-dimensional", node.pure_dimensional, true)?;
    expect("V(xy) irreducible", node.irreducible, false)?;
    let cone = ideal(&["x", "y", "z"], &["x^2 + y^2 + z^2"]);
    let first = lci_jet_check(ctx, &cone, 2, &dual).map_err(err)?;
    expect("cone irreducible over k[t]/(t^2)", first.irreducible, true)?;
    let fat =
        lci_jet_check(ctx, &cone, 2, &LocalAlgebra::fat_point(2, 2).map_err(err)?).map_err(err)?;
    expect(
        "cone irreducible over k[s,t]/(s,t)^2",
        fat.irreducible,
        true,
    )
    .map_err(|msg| {
        format!(
            "{msg}; jets over the vertex have dimension {} = {} = dim_k(A)·dim X",
            fat.fiber_dim, fat.expected
        )
    })?;
    Ok("all verdicts as stated".into())
}

fn sandwich() -> Outcome {
    let (checks, violations) = sandwich_stats();
    if checks == 0 {
        return Err("no jet dimension was checked".into());
    }
    expect("violations", violations, 0)?;
    Ok(format!("{checks} checks"))
}

fn main() -> ExitCode {
    let ctx = Context::default();
    let criteria: Vec<Criterion> = vec![
        ("smooth benchmark", Box::new(|| smooth_benchmark(&ctx))),
        ("cusp lct three ways", Box::new(|| cusp_three_ways(&ctx))),
        ("contact-locus oracle", Box::new(|| contact_oracle(&ctx))),
        ("iterated-jet consistency", Box::new(|| iterated_jets(&ctx))),
        ("beta cross-check", Box::new(|| beta_cross_check(&ctx))),
        ("monotonicity", Box::new(|| monotonicity(&ctx))),
        ("quasi-homogeneity", Box::new(quasi_homogeneity)),
        ("equation count and truncation", Box::new(equation_count)),
        ("mld agreement", Box::new(|| mld_agreement(&ctx))),
        ("iterated-jet bound coherence", Box::new(|| coherence(&ctx))),
        ("lci verdicts", Box::new(|| lci_verdicts(&ctx))),
        ("dimension sandwich", Box::new(sandwich)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(note) => println!("PASS {:>2} {name}: {note} ({t:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({t:.2?})", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
