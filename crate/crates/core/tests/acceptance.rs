//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_words, bfs_geodesic_length, pinch_reduce, random_rewrite, random_values};
use vershik_ga::bench::{prepare_suite, Suite};
use vershik_ga::decision::Decision;
use vershik_ga::ga::{mutate_insert, roulette_select, Member};
use vershik_ga::instance_gen::{generate, InstanceSpec, Layout};
use vershik_ga::traceback::trace;
use vershik_ga::word::{floor, normal_form, pseudo_normal_form, roof, syllables};
use vershik_ga::{
    cost, ga, is_solution, run, Chromosome, DcspInstance, Direction, GaConfig, GeneratorSubset, GroupSpec, Letter,
    Outcome, ParameterSet, Population, Recommendation, RngSource, ScriptedSource, Side, Word,
};

fn w(v: &[i32]) -> Word {
    Word::from_values(v).unwrap()
}

fn letters(v: &[i32]) -> Vec<Letter> {
    v.iter().map(|&x| Letter::new(x).unwrap()).collect()
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn golden_normal_form() -> Check {
    let spec = GroupSpec::new(8).unwrap();
    let u = w(&[6, 8, -1, 2, -8, -2, 6, 4, 5]);
    let start = Instant::now();
    let nf = normal_form(&u, &spec);
    let pnf = pseudo_normal_form(&u, &spec);
    let took = start.elapsed();
    ensure(nf == w(&[-1, 4, 6, 6, 5]), format!("normal form {nf}"))?;
    ensure(pnf == w(&[6, -1, 6, 4, 5]), format!("pseudo-normal form {pnf}"))?;
    ensure(took < Duration::from_millis(1), format!("took {took:?}"))?;
    Ok(format!("nf = {nf}, pnf = {pnf} in {took:?}"))
}

fn golden_roof_floor() -> Check {
    let spec = GroupSpec::new(6).unwrap();
    let u = w(&[-1, 2, 6, -5, 4, 1]);
    let rf: Vec<Letter> = roof(&u, &spec).into_iter().collect();
    let fl: Vec<Letter> = floor(&u, &spec).into_iter().collect();
    ensure(rf == letters(&[1, 4]), format!("roof {rf:?}"))?;
    ensure(fl == letters(&[-1, 6]), format!("floor {fl:?}"))?;
    Ok("RF = {x1, x4}, FL = {x1^-1, x6}".into())
}

fn worked_traceback() -> Check {
    let spec = GroupSpec::new(10).unwrap();
    let all = GeneratorSubset::new(1..=10, &spec).unwrap();
    let inst = DcspInstance::new(
        spec,
        all.clone(),
        all,
        w(&[2, 2, 3, 4, 5, -4, 7, -6, 9, 10]),
        w(&[2, 2, 4, 5, -4, 3, 7, -6, 10, 9]),
    )
    .unwrap();
    let c = Chromosome::new(w(&[3, -2, -3, 5, 7]), w(&[5, 2, 3, -7, 10]));
    let mut ds = ScriptedSource::new([Decision::Index(4), Decision::Coin(true), Decision::Index(0)]);
    let t = trace(&inst, &c, &mut ds);
    ensure(t.cost() == 26, format!("cost {}", t.cost()))?;
    let blocks: Vec<Vec<usize>> = t.blocks.iter().map(|b| b.labels.clone()).collect();
    ensure(
        blocks == vec![vec![0, 1, 2], vec![3], vec![4], vec![5], vec![8], vec![9]],
        format!("blocks {blocks:?}"),
    )?;
    ensure(t.delta == w(&[6, -5, -4, -7, 9, 10]), format!("delta {}", t.delta))?;
    ensure(t.candidates == letters(&[6, 9]), format!("candidates {:?}", t.candidates))?;
    let rec = t.recommendation;
    ensure(
        rec.generator == Letter::generator(6, false) && rec.label == 8 && rec.direction == Direction::Right,
        format!("recommendation {rec:?}"),
    )?;
    let child = mutate_insert(&inst, &c, &rec, &mut ScriptedSource::default());
    ensure(child.zeta == w(&[5, 2, 3, -7, -6, 10]), format!("zeta' {}", child.zeta))?;
    let c2 = cost(&inst, &child).unwrap();
    ensure(c2 == 25, format!("cost after insert {c2}"))?;
    Ok("cost 26 -> insert x6^-1 after label 8 -> cost 25".into())
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut exhaustive = 0usize;
    for rank in 2..=4 {
        let spec = GroupSpec::new(rank as usize).unwrap();
        for len in 0..=6 {
            for v in all_words(rank, len) {
                let got = normal_form(&w(&v), &spec).len();
                let want = bfs_geodesic_length(&v);
                ensure(got == want, format!("rank {rank}, {v:?}: {got} vs {want}"))?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let rank = rng.gen_range(2..=10);
        let len = rng.gen_range(0..=40);
        let spec = GroupSpec::new(rank as usize).unwrap();
        let mut v = random_values(&mut rng, rank, len);
        let nf = normal_form(&w(&v), &spec);
        let want = pinch_reduce(&v).len();
        ensure(nf.len() == want, format!("{v:?}: {} vs {want}", nf.len()))?;
        for _ in 0..20 {
            random_rewrite(&mut rng, &mut v, rank);
            let again = normal_form(&w(&v), &spec);
            ensure(again == nf, format!("rewrite changed normal form: {again} vs {nf}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), format!("took {took:?}"))?;
    Ok(format!("{exhaustive} exhaustive words + 1000 random words x 20 rewrites in {took:.1?}"))
}

fn syllables_ok(u: &Word, n: usize) -> bool {
    let syl = syllables(u);
    syl.iter().map(|&(_, mu)| mu.unsigned_abs() as usize).sum::<usize>() == u.len()
        && syl.windows(2).all(|p| match (p[0].0, p[1].0) {
            (1, next) => next > 1,
            (m, next) if m < n => next == m - 1 || next > m,
            (_, next) => next == n - 1,
        })
}

fn dummy_member(chi: i32, c: usize) -> Member {
    Member {
        chromosome: Chromosome::new(w(&[chi]), Word::empty()),
        cost: c,
        recommendation: Recommendation {
            generator: Letter::generator(1, true),
            label: 0,
            side: Side::Chi,
            direction: Direction::Right,
            fallback: true,
        },
    }
}

fn property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2000 {
        let rank = rng.gen_range(2..=10);
        let spec = GroupSpec::new(rank as usize).unwrap();
        let len = rng.gen_range(0..=40);
        let u = w(&random_values(&mut rng, rank, len));
        let nf = normal_form(&u, &spec);
        ensure(normal_form(&nf, &spec) == nf, format!("not idempotent on {u}"))?;
        ensure(syllables_ok(&nf, spec.rank()), format!("syllable conditions fail on {nf}"))?;
        ensure(pseudo_normal_form(&u, &spec).len() == nf.len(), format!("l(pnf) != l(nf) on {u}"))?;
    }

    let spec = GroupSpec::new(10).unwrap();
    for k in 0..200 {
        let g = generate(&InstanceSpec { rank: 10, l_a: 30, l_x: 4, l_y: 4, layout: Layout::ProblemP, seed: k }).unwrap();
        let x = w(&random_values(&mut rng, 4, 10));
        let y = w(&random_values(&mut rng, 4, 10).iter().map(|v| v.signum() * (v.abs() + 6)).collect::<Vec<_>>());
        let c = Chromosome::new(x, y);
        ensure(
            cost(&g.instance, &c) == cost(&g.instance, &c.pseudo_reduced(&spec)),
            "cost changed under pseudo-reduction",
        )?;
    }

    let inst = generate(&InstanceSpec { rank: 10, l_a: 40, l_x: 6, l_y: 6, layout: Layout::ProblemP, seed: 5 })
        .unwrap()
        .instance;
    let params = ParameterSet::new(40, [2, 6, 2, 20, 6, 4]).unwrap();
    for seed in 0..3 {
        let config = GaConfig { sigma: 150, seed, ..GaConfig::default() };
        let mut sizes_ok = true;
        let r = ga::run_observed(&inst, &params, &config, |_, p| sizes_ok &= p.len() == 40).unwrap();
        ensure(sizes_ok, "population size changed")?;
        ensure(r.best_cost_trace.windows(2).all(|p| p[1] <= p[0]), "best cost increased")?;
    }

    let pop = Population::from_members(vec![dummy_member(1, 1), dummy_member(2, 3)]);
    let draws = 100_000;
    let picks = roulette_select(&pop, draws + 1, &mut RngSource::seeded(7));
    let best = &pop.best().chromosome;
    let freq = picks[1..].iter().filter(|c| *c == best).count() as f64 / draws as f64;
    ensure((freq - 0.75).abs() <= 0.01, format!("roulette frequency {freq}"))?;
    Ok(format!("all properties hold; roulette frequency {freq:.4}"))
}

fn median(v: &mut [usize]) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn table_one_row_one() -> Check {
    let mut gens = Vec::new();
    let mut solved = 0;
    for k in 0..10u64 {
        let g = generate(&InstanceSpec { rank: 10, l_a: 128, l_x: 16, l_y: 16, layout: Layout::ProblemP, seed: 1000 + k })
            .unwrap();
        let config = GaConfig { sigma: 2000, seed: k, initial_length: 1, ..GaConfig::default() };
        let r = run(&g.instance, &ParameterSet::default(), &config).unwrap();
        if let Outcome::Solution(c) = &r.outcome {
            ensure(is_solution(&g.instance, c), format!("run {k}: unverified solution"))?;
            solved += 1;
            gens.push(r.generations);
        }
    }
    let med = if gens.is_empty() { f64::NAN } else { median(&mut gens) };
    let msg = format!("{solved}/10 solved, median g = {med}");
    ensure(solved >= 8 && (30.0..=915.0).contains(&med), msg.clone())?;
    Ok(msg)
}

const TABLE_TWO: &str = "pop 200\nparams 5,33,4,128,30,0\nsigma 10000\ninit-len 1\n\
instance gen:n=10,la-max=750,lx-max=150,ly-max=150,s-min=15,s-max=30,seed=1000 repeat 1 seed 1 count 10\n\
instance gen:n=20,la-max=750,lx-max=150,ly-max=150,s-min=15,s-max=30,seed=2000 repeat 1 seed 1 count 5\n";

fn table_two_smoke() -> Check {
    let suite = Suite::parse(TABLE_TWO, Path::new(".")).unwrap();
    let (mut g10, mut ok10, mut ok20) = (Vec::new(), 0, 0);
    for (p, seeds) in prepare_suite(&suite).unwrap() {
        let n = p.instance.spec().rank();
        ensure((15.0..30.0).contains(&p.s), format!("{}: s = {} outside [15, 30)", p.id, p.s))?;
        for seed in seeds {
            let config = GaConfig { seed, ..suite.config };
            let r = run(&p.instance, &suite.params, &config).unwrap();
            if let Outcome::Solution(c) = &r.outcome {
                ensure(is_solution(&p.instance, c), format!("{}: unverified solution", p.id))?;
                if n == 10 {
                    ok10 += 1;
                    g10.push(r.generations as f64);
                } else {
                    ok20 += 1;
                }
            }
        }
    }
    let mean10 = g10.iter().sum::<f64>() / g10.len().max(1) as f64;
    let msg = format!("n=10: {ok10}/10 solved, mean g = {mean10:.1}; n=20: {ok20}/5 solved");
    ensure(ok10 == 10 && (23.0..=2270.0).contains(&mean10) && ok20 >= 4, msg.clone())?;
    Ok(msg)
}

fn solve_soundness() -> Check {
    let dir = std::env::temp_dir().join(format!("vershik-ga-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let (mut emitted, mut timeouts) = (0, 0);
    for k in 0..50u64 {
        let g = generate(&InstanceSpec { rank: 10, l_a: 48, l_x: 5, l_y: 5, layout: Layout::ProblemP, seed: 500 + k })
            .unwrap();
        let path = dir.join(format!("inst{k:02}.txt"));
        fs::write(&path, g.to_file().to_string()).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_vershik-ga"))
            .args(["solve", path.to_str().unwrap(), "--seed", &k.to_string(), "--sigma", "3000"])
            .output()
            .unwrap();
        match out.status.code() {
            Some(0) => {
                let text = String::from_utf8_lossy(&out.stdout);
                let field = |key: &str| -> Word {
                    text.lines()
                        .find_map(|l| l.strip_prefix(key))
                        .map(|s| s.trim().parse().unwrap())
                        .unwrap_or_default()
                };
                let c = Chromosome::new(field("x "), field("y "));
                ensure(is_solution(&g.instance, &c), format!("instance {k}: emitted pair fails verification"))?;
                emitted += 1;
            }
            Some(2) => timeouts += 1,
            other => return Err(format!("instance {k}: exit {other:?}")),
        }
    }
    let _ = fs::remove_dir_all(&dir);
    ensure(emitted > 0, "no solutions emitted")?;
    Ok(format!("{emitted}/{emitted} emitted solutions verified ({timeouts} timeouts)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden normal form", golden_normal_form),
        ("roof/floor golden case", golden_roof_floor),
        ("traceback worked example", worked_traceback),
        ("oracle equivalence", oracle_equivalence),
        ("property suite", property_suite),
        ("desk-scale table 1 row I1", table_one_row_one),
        ("desk-scale table 2 smoke", table_two_smoke),
        ("end-to-end soundness", solve_soundness),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
