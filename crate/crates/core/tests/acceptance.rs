//! One line per acceptance criterion; exits nonzero if any fails or runs
//! over its time limit.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;

use mpd_core::functional::{
    check_healthiness, check_transformer, lambda, minkowski, minkowski_with_witness, Functional,
    GeneratorFunctional, HealthSuite, Selectors, Shifted,
};
use mpd_core::hull::{membership, separate, HullSide, Membership};
use mpd_core::io::Loader;
use mpd_core::lang::{check_duality, denote, duality_posts, parse_program, Program, StateSpace, DEFAULT_VAR_CAP};
use mpd_core::laws::{
    expect_all, kegelspitze_semilattice_suite, randomset_witnesses, run_suite, valuation_suite, Expect, PowerModel,
    ValuationModel,
};
use mpd_core::rat::{int, rat};
use mpd_core::sample;
use mpd_core::valuation::{choquet_direct, choquet_threshold};
use mpd_core::{
    ExtRat, FinitePoset, Flavor, PowerElement, RangeMode, Rat, StateTransformer, Valuation,
};

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, u64, fn() -> Outcome);

const SEED: u64 = 20_240_917;

fn fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn small_posets() -> Vec<(&'static str, FinitePoset)> {
    vec![
        ("point", FinitePoset::discrete(&["a"]).unwrap()),
        ("2-chain", FinitePoset::chain(&["a", "b"]).unwrap()),
        ("2-antichain", FinitePoset::discrete(&["a", "b"]).unwrap()),
    ]
}

fn vee() -> FinitePoset {
    FinitePoset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")], 16).unwrap()
}

fn programs() -> Vec<(String, Program)> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures().join("programs"))
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mpd"))
        .collect();
    paths.sort();
    for p in paths {
        let text = std::fs::read_to_string(&p).unwrap();
        let name = p.file_stem().unwrap().to_string_lossy().into_owned();
        out.push((name, parse_program(&text).unwrap()));
    }
    out
}

// ---------------------------------------------------------------------------

fn axiom_suites() -> Outcome {
    let mut runs = 0;
    let posets = [
        ("2-chain", FinitePoset::chain(&["a", "b"]).unwrap()),
        ("2-antichain", FinitePoset::discrete(&["a", "b"]).unwrap()),
        ("3-vee", vee()),
    ];
    for (name, p) in &posets {
        let m = ValuationModel { poset: p.clone(), den: 4 };
        let r = run_suite(&m, &expect_all(valuation_suite()), 200, SEED).map_err(e)?;
        ensure(r.passed, || format!("valuation on {name}: {:?}", failing(&r)))?;
        runs += 1;
        for flavor in Flavor::ALL {
            let m = PowerModel {
                flavor,
                poset: p.clone(),
                max_gens: 3,
                den: 4,
            };
            let r = run_suite(&m, &expect_all(kegelspitze_semilattice_suite()), 200, SEED).map_err(e)?;
            ensure(r.passed, || format!("{flavor} on {name}: {:?}", failing(&r)))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} model/poset suites, 200 samples per law"))
}

fn failing(r: &mpd_core::laws::LawReport) -> Vec<String> {
    r.checks.iter().filter(|c| !c.ok).map(|c| c.law.clone()).collect()
}

/// Pass/fail of every (program, flavor, fuel) duality check.
fn duality_pattern(mode: RangeMode) -> Result<(Vec<bool>, usize), String> {
    let mut pattern = Vec::new();
    let mut checks = 0;
    for (name, prog) in programs() {
        let space = StateSpace::of(&prog, DEFAULT_VAR_CAP).map_err(e)?;
        let posts = duality_posts(space.poset(), mode, 20, SEED).map_err(e)?;
        if posts.len() < 20 {
            return Err(format!("{name}: only {} posts", posts.len()));
        }
        for flavor in Flavor::ALL {
            for fuel in 0..=3 {
                let r = check_duality(&prog, &space, flavor, fuel, &posts).map_err(e)?;
                checks += posts.len() * space.len();
                pattern.push(r.passed);
            }
        }
    }
    Ok((pattern, checks))
}

static DUALITY_EXTENDED: OnceLock<Vec<bool>> = OnceLock::new();
static HEALTH_EXTENDED: OnceLock<Vec<bool>> = OnceLock::new();

fn duality() -> Outcome {
    let n = programs().len();
    ensure(n >= 10, || format!("only {n} fixture programs"))?;
    let (pattern, checks) = duality_pattern(RangeMode::Extended)?;
    let _ = DUALITY_EXTENDED.set(pattern.clone());
    let failed = pattern.iter().filter(|p| !**p).count();
    ensure(failed == 0, || format!("{failed} program/flavor/fuel combinations disagree"))?;
    Ok(format!("{n} programs x 3 flavors x fuels 0..3, {checks} state/post comparisons"))
}

/// Pass flags of the fixture denotations followed by those of the three
/// mutants per flavor.
fn health_pattern(mode: RangeMode) -> Result<(Vec<bool>, Vec<String>), String> {
    let mut pattern = Vec::new();
    let mut notes = Vec::new();
    for (name, prog) in programs() {
        let space = StateSpace::of(&prog, DEFAULT_VAR_CAP).map_err(e)?;
        let suite = HealthSuite::generate(space.poset(), mode, 6, SEED).map_err(e)?;
        for flavor in Flavor::ALL {
            let s = denote(&prog, &space, flavor, 2).map_err(e)?;
            let r = check_transformer(&s, &suite).map_err(e)?;
            if !r.passed {
                notes.push(format!("{name}/{flavor}: {:?}", r.failed_laws()));
            }
            pattern.push(r.passed);
        }
    }
    // mutants of the coin-and-demon denotation
    let prog = programs().into_iter().find(|(n, _)| n == "coin_demon").expect("coin_demon fixture").1;
    let space = StateSpace::of(&prog, DEFAULT_VAR_CAP).map_err(e)?;
    let suite = HealthSuite::generate(space.poset(), mode, 6, SEED).map_err(e)?;
    for flavor in Flavor::ALL {
        let s = denote(&prog, &space, flavor, 0).map_err(e)?;
        let x = s.at(0);
        let good = GeneratorFunctional::of(x);
        let shifted = Shifted {
            inner: good.clone(),
            shift: rat(1, 2),
        };
        let flipped = good.clone().with_selectors(Selectors::for_flavor(flavor).flipped());
        let heavy = x.generators()[0].scale(&int(2)).map_err(e)?;
        let overweight =
            GeneratorFunctional::raw(space.poset(), vec![heavy], Selectors::for_flavor(flavor)).map_err(e)?;
        let mutants: [(&str, &dyn Functional); 3] =
            [("constant-shift", &shifted), ("polarity-flip", &flipped), ("mass>1", &overweight)];
        for (label, f) in mutants {
            let r = check_healthiness(f, flavor, &suite, &[]).map_err(e)?;
            if r.passed || r.violations.is_empty() {
                notes.push(format!("{label}/{flavor} was not rejected"));
            }
            pattern.push(r.passed);
        }
    }
    Ok((pattern, notes))
}

fn healthiness() -> Outcome {
    let (pattern, notes) = health_pattern(RangeMode::Extended)?;
    let _ = HEALTH_EXTENDED.set(pattern.clone());
    ensure(notes.is_empty(), || notes.join("; "))?;
    let mutants = 9;
    Ok(format!(
        "{} denotations healthy, {mutants} mutants rejected with counterexamples",
        pattern.len() - mutants
    ))
}

fn scaling_not_cancellative() -> Outcome {
    let loader = Loader::default();
    let dir = fixtures().join("scaling");
    let x = loader.power_element(&dir.join("x_prime.json")).map_err(e)?;
    let y = loader.power_element(&dir.join("y.json")).map_err(e)?;
    let half_y_file = loader.power_element(&dir.join("half_y.json")).map_err(e)?;
    let half = rat(1, 2);
    let half_y = PowerElement::scale_pd(&half, &y).map_err(e)?;
    ensure(half_y.po_equal(&half_y_file).map_err(e)?, || "1/2·Y does not match the fixture".into())?;
    ensure(x.po_leq(&half_y).map_err(e)?, || "X' <= 1/2·Y fails".into())?;
    // 1/2·x = (0,1) forces x = (0,2)
    let p = x.poset();
    let target = Valuation::from_pairs(p, &[("1", Rat::one())]).map_err(e)?;
    let solution = target.scale(&int(2)).map_err(e)?;
    ensure(solution.scale(&half).map_err(e)? == target, || "scaling back failed".into())?;
    ensure(!solution.is_subprobability(), || "(0,2) is a subprobability valuation".into())?;
    ensure(x.contains(&target).map_err(e)?, || "(0,1) is not in X'".into())?;
    Ok("X' <= 1/2·Y holds and 1/2·x = (0,1) needs mass 2".into())
}

fn randomset_laws() -> Outcome {
    let r = randomset_witnesses(2, 200, SEED).map_err(e)?;
    let w = r.idempotence.as_ref().ok_or("no idempotence witness")?;
    let expected: std::collections::BTreeMap<String, String> = [("{a}", "1/4"), ("{a,b}", "1/2"), ("{b}", "1/4")]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    ensure(w.self_union == expected && !w.equal, || format!("self-union was {:?}", w.self_union))?;
    let get = |id: &str| r.laws.check(id).ok_or(format!("missing {id}"));
    let idem = get("union-idem")?;
    ensure(idem.observed == Expect::Fails, || "union idempotence held".into())?;
    let dist = get("comb-over-union")?;
    ensure(dist.observed == Expect::Fails && dist.counterexample.is_some(), || {
        "no counterexample to +_r over union".into()
    })?;
    for id in ["union-over-comb", "union-assoc", "union-comm"] {
        let c = get(id)?;
        ensure(c.observed == Expect::Holds && c.samples == 200, || format!("{id} failed"))?;
    }
    ensure(r.multiset.all_differ, || "some multiset p equals pp".into())?;
    ensure(r.passed, || "witness report did not pass".into())?;
    Ok(format!("idempotence and +_r-over-union fail; {} multiset samples all differ", r.multiset.samples))
}

fn oracle_equivalences() -> Outcome {
    let mut rng = sample::rng(SEED);
    let posets: Vec<FinitePoset> = small_posets().into_iter().map(|(_, p)| p).chain([vee()]).collect();
    for k in 0..500 {
        let p = &posets[k % posets.len()];
        let f = if k % 10 == 0 {
            sample::infinite_predicate(&mut rng, p)
        } else {
            sample::predicate(&mut rng, p, RangeMode::Extended)
        };
        let mu = sample::subprobability(&mut rng, p, 8);
        let (a, b) = (choquet_direct(&f, &mu).map_err(e)?, choquet_threshold(&f, &mu).map_err(e)?);
        ensure(a == b, || format!("Choquet formulas differ on {f} and {mu}: {a} vs {b}"))?;
    }
    let mut pairs = 0;
    for (name, p) in small_posets().into_iter().filter(|(_, p)| p.len() == 2) {
        let grid = sample::grid(&p, 4);
        for mu in &grid {
            for nu in &grid {
                let full = mu.leq(nu).map_err(e)?;
                let basis = mu.leq_on_basis(nu).map_err(e)?;
                ensure(full == basis, || format!("{name}: leq disagrees on {mu} vs {nu}"))?;
                pairs += 1;
            }
        }
    }
    let mut members = 0;
    for k in 0..30 {
        let p = &posets[k % posets.len()];
        let flavor = Flavor::ALL[k % 3];
        let x = sample::power_element(&mut rng, flavor, p, 3, 4).map_err(e)?;
        let f = sample::predicate(&mut rng, p, RangeMode::Extended);
        let bounds = lambda(&x, &f).map_err(e)?;
        for _ in 0..100 {
            let m = hull_member(&mut rng, &x);
            ensure(x.contains(&m).map_err(e)?, || format!("sampled {m} is not in {x}"))?;
            let v = choquet_direct(&f, &m).map_err(e)?;
            let ok = match flavor {
                Flavor::Lower => v <= bounds.hi,
                Flavor::Upper => v >= bounds.lo,
                Flavor::Convex => bounds.lo <= v && v <= bounds.hi,
            };
            ensure(ok, || format!("member {m} of {x} integrates to {v} outside {bounds}"))?;
            members += 1;
        }
    }
    Ok(format!("500 Choquet pairs, {pairs} grid order pairs, {members} hull members"))
}

/// A random element of the set denoted by `x`: a convex combination of its
/// generators, shrunk (lower), grown within the mass budget (upper), or kept
/// (convex).
fn hull_member(rng: &mut sample::SampleRng, x: &PowerElement) -> Valuation {
    let p = x.poset();
    let weights: Vec<i64> = x.generators().iter().map(|_| rng.gen_range(0..=4)).collect();
    let total: i64 = weights.iter().sum::<i64>().max(1);
    let mut m = Valuation::zero(p);
    let mut used = 0;
    for (w, g) in weights.iter().zip(x.generators()) {
        used += w;
        m = m.add(&g.scale(&rat(*w, total)).unwrap()).unwrap();
    }
    if used == 0 {
        m = x.generators()[0].clone();
    }
    match x.flavor() {
        Flavor::Lower => m.scale(&sample::unit_rat(rng, 4)).unwrap(),
        Flavor::Upper => {
            let room = Rat::one() - m.total_mass();
            let extra = sample::subprobability(rng, p, 4).scale(&room).unwrap();
            m.add(&extra).unwrap()
        }
        Flavor::Convex => m,
    }
}

fn separation() -> Outcome {
    let (mut members, mut separated) = (0, 0);
    for (name, p) in small_posets() {
        let grid = sample::grid(&p, 4);
        let mut families: Vec<Vec<Valuation>> = grid.iter().map(|g| vec![g.clone()]).collect();
        for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                families.push(vec![grid[i].clone(), grid[j].clone()]);
            }
        }
        for side in [HullSide::Lower, HullSide::Upper] {
            for fam in &families {
                for mu in &grid {
                    match membership(side, mu, fam).map_err(e)? {
                        Membership::Member(weights) => {
                            ensure(member_verified(side, mu, fam, &weights), || {
                                format!("{name}: bad weights for {mu} in {fam:?}")
                            })?;
                            ensure(separate(side, mu, fam).is_err(), || {
                                format!("{name}: {mu} is both a member and separated")
                            })?;
                            members += 1;
                        }
                        Membership::Separated(cert) => {
                            ensure(cert.verify(mu, fam).map_err(e)?, || {
                                format!("{name}: certificate for {mu} against {fam:?} does not verify")
                            })?;
                            separated += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{members} verified members, {separated} verified certificates"))
}

fn member_verified(side: HullSide, mu: &Valuation, fam: &[Valuation], weights: &[Rat]) -> bool {
    if weights.len() != fam.len() || weights.iter().any(|w| *w < Rat::zero()) {
        return false;
    }
    if weights.iter().sum::<Rat>() != Rat::one() {
        return false;
    }
    let mut combo = Valuation::zero(mu.poset());
    for (w, f) in weights.iter().zip(fam) {
        combo = combo.add(&f.scale(w).unwrap()).unwrap();
    }
    match side {
        HullSide::Lower => mu.leq(&combo).unwrap(),
        HullSide::Upper => combo.leq(mu).unwrap(),
    }
}

fn minkowski_properties() -> Outcome {
    let mut rng = sample::rng(SEED ^ 8);
    let posets: Vec<FinitePoset> = small_posets().into_iter().map(|(_, p)| p).chain([vee()]).collect();
    for k in 0..200 {
        let p = &posets[k % posets.len()];
        let x = sample::power_element(&mut rng, Flavor::Lower, p, 3, 4).map_err(e)?;
        let gens = x.generators();
        let a = sample::subprobability(&mut rng, p, 4);
        let b = sample::subprobability(&mut rng, p, 4);
        let sum = a.add(&b).map_err(e)?;
        let (na, nb, ns) = (
            minkowski(gens, &a).map_err(e)?,
            minkowski(gens, &b).map_err(e)?,
            minkowski(gens, &sum).map_err(e)?,
        );
        ensure(ns <= &na + &nb, || format!("subadditivity fails for {a}, {b} in {x}"))?;
        let r = rat(rng.gen_range(0..=6), rng.gen_range(1..=3));
        let scaled = minkowski(gens, &a.scale(&r).map_err(e)?).map_err(e)?;
        ensure(scaled == na.scale(&r), || format!("homogeneity fails for {r}·{a} in {x}"))?;
    }
    let mut grid_checks = 0;
    let mut witnesses = 0;
    for (name, p) in small_posets() {
        let grid = sample::grid(&p, 4);
        for (i, g) in grid.iter().enumerate() {
            let fams = [vec![g.clone()], vec![g.clone(), grid[(i * 7 + 3) % grid.len()].clone()]];
            for fam in &fams {
                for mu in &grid {
                    let v = minkowski_with_witness(fam, mu).map_err(e)?;
                    let inside = mpd_core::hull::in_lower_hull(mu, fam).map_err(e)?;
                    ensure((v.value <= ExtRat::one()) == inside, || {
                        format!("{name}: ν({mu}) = {} but membership is {inside}", v.value)
                    })?;
                    grid_checks += 1;
                    if let ExtRat::Fin(val) = &v.value {
                        if !val.is_zero() {
                            let w = v.witness.as_ref().ok_or_else(|| format!("{name}: no witness for {mu}"))?;
                            ensure(w.member.scale(val).map_err(e)? == *mu, || "a != ν·x".into())?;
                            ensure(member_verified(HullSide::Lower, &w.member, fam, &w.weights), || {
                                format!("{name}: witness {} not in the hull", w.member)
                            })?;
                            witnesses += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("200 sublinearity pairs, {grid_checks} grid points, {witnesses} attainment witnesses"))
}

/// A monotone transformer: antichain entries are independent, and along a
/// chain each entry is a scaled copy of the one above it.
fn random_transformer(rng: &mut sample::SampleRng, flavor: Flavor, p: &FinitePoset) -> StateTransformer {
    let mut table: Vec<Option<PowerElement>> = vec![None; p.len()];
    for i in (0..p.len()).rev() {
        let above = p.covers().into_iter().find(|&(lo, _)| lo == i).map(|(_, hi)| hi);
        table[i] = Some(match above {
            Some(hi) => {
                let r = sample::unit_rat(rng, 4);
                PowerElement::scale_pd(&r, table[hi].as_ref().unwrap()).unwrap()
            }
            None => sample::power_element(rng, flavor, p, 2, 4).unwrap(),
        });
    }
    StateTransformer::new(flavor, p, p, table.into_iter().map(Option::unwrap).collect()).unwrap()
}

fn kleisli_laws() -> Outcome {
    let mut rng = sample::rng(SEED ^ 9);
    let posets: Vec<FinitePoset> = small_posets().into_iter().map(|(_, p)| p).collect();
    let mut pairs = 0;
    for flavor in Flavor::ALL {
        for k in 0..50 {
            let p = &posets[k % posets.len()];
            let s = random_transformer(&mut rng, flavor, p);
            let t = random_transformer(&mut rng, flavor, p);
            let x = sample::power_element(&mut rng, flavor, p, 3, 4).map_err(e)?;
            let unit = StateTransformer::unit(flavor, p);
            let eq = |a: &PowerElement, b: &PowerElement| a.po_equal(b).map_err(e);
            ensure(eq(&unit.kleisli_extend(&x).map_err(e)?, &x)?, || format!("η† X != X for {x}"))?;
            for i in 0..p.len() {
                let via_unit = s.kleisli_extend(&PowerElement::eta_at(flavor, p, i)).map_err(e)?;
                ensure(eq(&via_unit, s.at(i))?, || format!("s†(η x) != s(x) at {}", p.name(i)))?;
            }
            let st = s.then(&t).map_err(e)?;
            let left = st.kleisli_extend(&x).map_err(e)?;
            let right = t.kleisli_extend(&s.kleisli_extend(&x).map_err(e)?).map_err(e)?;
            ensure(eq(&left, &right)?, || format!("associativity fails on {x}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} transformer pairs, unit and associativity laws hold"))
}

fn unit_mode() -> Outcome {
    let extended_duality = match DUALITY_EXTENDED.get() {
        Some(p) => p.clone(),
        None => duality_pattern(RangeMode::Extended)?.0,
    };
    let extended_health = match HEALTH_EXTENDED.get() {
        Some(p) => p.clone(),
        None => health_pattern(RangeMode::Extended)?.0,
    };
    let (unit_duality, _) = duality_pattern(RangeMode::Unit)?;
    let (unit_health, notes) = health_pattern(RangeMode::Unit)?;
    ensure(unit_duality == extended_duality, || "duality results differ in unit mode".into())?;
    ensure(unit_health == extended_health, || format!("healthiness results differ in unit mode: {notes:?}"))?;
    ensure(notes.is_empty(), || notes.join("; "))?;
    Ok(format!(
        "{} duality and {} healthiness results identical to extended mode",
        unit_duality.len(),
        unit_health.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "axiom suites", 30, axiom_suites),
        (2, "wp/lambda duality", 60, duality),
        (3, "healthiness and mutants", 30, healthiness),
        (4, "scaling is not cancellative", 1, scaling_not_cancellative),
        (5, "random-set witnesses", 10, randomset_laws),
        (6, "oracle equivalences", 60, oracle_equivalences),
        (7, "separation dichotomy", 120, separation),
        (8, "Minkowski functional", 30, minkowski_properties),
        (9, "Kleisli laws", 60, kleisli_laws),
        (10, "unit mode", 60, unit_mode),
    ];
    let mut failures = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let limit = Duration::from_secs(limit);
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} [{id:>2}] {name} ({:.2}s, limit {}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
