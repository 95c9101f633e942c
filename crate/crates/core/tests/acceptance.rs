//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyqudit::axioms::angles::{euler_so3, pi_split, split_residual, Convention, Rotation3};
use polyqudit::axioms::synth::{synth_two_level, Unitary2};
use polyqudit::axioms::{
    catalog, check_instance, find_schema, instantiate, run_harness, sample_params, HarnessConfig,
    Params, Status, Term, Theory,
};
use polyqudit::graycode::{gray_index, gray_word, GrayContext};
use polyqudit::normalize::{is_layer_form, separate_traced, Layer};
use polyqudit::random::{random_angle, random_on};
use polyqudit::semantics::{identity_on, interp_lopp_gray, interp_qudit, support_indices, Matrix};
use polyqudit::transpile::{decode, encode, DecodingContext, EncodingContext};
use polyqudit::{Circuit, LoppCircuit};

const TOL: f64 = 1e-9;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

fn gray_invariants() -> Outcome {
    let mut words = 0usize;
    for d in 2..=5 {
        for n in 1..=6 {
            let total = pow(d, n);
            let mut seen = vec![false; total];
            let mut prev: Option<Vec<usize>> = None;
            for k in 0..total {
                let w = gray_word(d, n, k).unwrap();
                if w.len() != n || w.iter().any(|&h| h >= d) || gray_index(d, &w).unwrap() != k {
                    return outcome(false, format!("bijection fails at d={d} n={n} k={k}"));
                }
                let v = w.iter().fold(0, |acc, &h| acc * d + h);
                if std::mem::replace(&mut seen[v], true) {
                    return outcome(false, format!("word repeated at d={d} n={n} k={k}"));
                }
                if let Some(p) = prev {
                    let diffs: Vec<i64> = p
                        .iter()
                        .zip(&w)
                        .map(|(&a, &b)| b as i64 - a as i64)
                        .filter(|&x| x != 0)
                        .collect();
                    if diffs.len() != 1 || diffs[0].abs() != 1 {
                        return outcome(
                            false,
                            format!("neighbour property fails at d={d} n={n} k={k}"),
                        );
                    }
                }
                prev = Some(w);
                words += 1;
            }
        }
    }
    outcome(true, format!("{words} words, d 2..5, n 1..6"))
}

fn fixed_listings() -> Outcome {
    let listing = |d: usize, n: usize| -> Vec<String> {
        (0..pow(d, n))
            .map(|k| {
                gray_word(d, n, k)
                    .unwrap()
                    .iter()
                    .map(|h| h.to_string())
                    .collect()
            })
            .collect()
    };
    let d3 = listing(3, 2);
    let d2 = listing(2, 2);
    let ok = d3 == ["00", "01", "02", "12", "11", "10", "20", "21", "22"]
        && d2 == ["00", "01", "11", "10"];
    outcome(ok, format!("d=3: {}; d=2: {}", d3.join(","), d2.join(",")))
}

fn axiom_soundness() -> Outcome {
    let mut worst = 0.0f64;
    let mut lines = 0;
    let mut skips = 0;
    let mut fails = Vec::new();
    for theory in [Theory::Qc, Theory::QcDerived, Theory::Lopp] {
        for d in 2..=4 {
            let cfg = HarnessConfig {
                d,
                samples: 200,
                seed: 0,
                tol: TOL,
            };
            for line in run_harness(theory, cfg) {
                lines += 1;
                match line.status {
                    Status::Pass => worst = worst.max(line.max_residual),
                    Status::Skip => skips += 1,
                    Status::Fail => fails.push(line.to_string()),
                }
            }
        }
    }
    let schemas: usize = [Theory::Qc, Theory::QcDerived, Theory::Lopp]
        .iter()
        .map(|&t| catalog(t).len())
        .sum();
    let detail = format!(
        "{schemas} schemas, {lines} (schema, d) lines x 200 instances, {skips} skipped by side condition, max residual {worst:.3e}{}",
        if fails.is_empty() { String::new() } else { format!("; failing: {}", fails.join(" | ")) }
    );
    outcome(fails.is_empty(), detail)
}

const GRID: [(usize, usize); 5] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];

fn enc_correct() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for (d, n) in GRID {
        for _ in 0..100 {
            let c = random_on(&mut r, d, n, 5);
            let e = encode(EncodingContext { d, a: 0, b: 0 }, &c).unwrap();
            let got = interp_lopp_gray(&e, d, n).unwrap();
            worst = worst.max(got.max_diff(&interp_qudit(&c, d).unwrap()).unwrap());
        }
    }
    outcome(
        worst <= TOL,
        format!("500 circuits, max residual {worst:.3e}"),
    )
}

fn retraction() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (d, n) in GRID {
        let cap = if d == 2 { 4 } else { 3 };
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            if a + n + b > cap {
                continue;
            }
            for _ in 0..100 {
                let c = random_on(&mut r, d, n, 4);
                let e = encode(EncodingContext { d, a, b }, &c).unwrap();
                let back = decode(
                    DecodingContext {
                        d,
                        t: 0,
                        n: a + n + b,
                    },
                    &e,
                )
                .unwrap();
                let want = identity_on(d, a)
                    .kron(&interp_qudit(&c, d).unwrap())
                    .kron(&identity_on(d, b));
                worst = worst.max(interp_qudit(&back, d).unwrap().max_diff(&want).unwrap());
                count += 1;
            }
        }
    }
    outcome(
        worst <= TOL,
        format!("{count} circuits, max residual {worst:.3e}"),
    )
}

fn mimicking() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (si, schema) in catalog(Theory::Lopp).iter().enumerate() {
        for d in [2, 3] {
            for n in 1..=2 {
                let modes = pow(d, n);
                for i in 0..10 {
                    let mut r = ChaCha8Rng::seed_from_u64(
                        ((si as u64) << 32) ^ ((d as u64) << 16) ^ ((n as u64) << 8) ^ i,
                    );
                    let inst =
                        instantiate(schema, d, &sample_params(schema, d, &mut r).unwrap()).unwrap();
                    let (Term::Lopp(l), Term::Lopp(rh)) = (&inst.lhs, &inst.rhs) else {
                        unreachable!()
                    };
                    for t in 0..=modes.saturating_sub(l.modes()) {
                        if t + l.modes() > modes {
                            continue;
                        }
                        let ctx = DecodingContext { d, t, n };
                        let dl = interp_qudit(&decode(ctx, l).unwrap(), d).unwrap();
                        let dr = interp_qudit(&decode(ctx, rh).unwrap(), d).unwrap();
                        worst = worst.max(dl.max_diff(&dr).unwrap());
                        count += 1;
                    }
                }
            }
        }
    }
    outcome(
        worst <= TOL,
        format!("{count} embedded instances, max residual {worst:.3e}"),
    )
}

fn locality() -> Outcome {
    let (d, n) = (3, 2);
    let gray = GrayContext::new(d, n).unwrap();
    let modes = gray.len();
    let mut checked = 0;
    for t in 0..modes {
        let mut gates = vec![(LoppCircuit::phase(0.37), 1), (LoppCircuit::phase(-2.1), 1)];
        if t + 1 < modes {
            gates.extend([
                (LoppCircuit::swap(), 2),
                (LoppCircuit::beam_splitter(0.7), 2),
                (LoppCircuit::beam_splitter(-1.3), 2),
            ]);
        }
        for (g, width) in gates {
            let c = decode(DecodingContext { d, t, n }, &g).unwrap();
            let support = support_indices(&interp_qudit(&c, d).unwrap(), 1e-12);
            let want: std::collections::BTreeSet<usize> =
                (t..t + width).map(|k| gray.value_of_mode(k)).collect();
            if support != want {
                return outcome(
                    false,
                    format!("offset {t}: support {support:?}, predicted {want:?}"),
                );
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} decoded generators, all offsets"))
}

fn control_algebra() -> Outcome {
    let mut r = rng(8);
    let mut worst = [0.0f64; 3];
    let u = |c: &Circuit, d| interp_qudit(c, d).unwrap();
    for i in 0..100 {
        let d = 2 + i % 2;
        let n = r.gen_range(1..=2);
        let f = random_on(&mut r, d, n, 4);
        let g = random_on(&mut r, d, n, 4);
        let (a, b) = (r.gen_range(0..d), r.gen_range(0..d));
        let sw = Circuit::par(Circuit::swap(), Circuit::id(n));
        let cab = Circuit::ctrl(a, Circuit::ctrl(b, f.clone()));
        let cba = Circuit::ctrl(b, Circuit::ctrl(a, f.clone()));
        let compat = u(&Circuit::seq(cab, sw.clone()), d)
            .max_diff(&u(&Circuit::seq(sw, cba), d))
            .unwrap();
        let b2 = (a + 1 + r.gen_range(0..d - 1)) % d;
        let (fa, gb) = (Circuit::ctrl(a, f.clone()), Circuit::ctrl(b2, g));
        let comm = u(&Circuit::seq(fa.clone(), gb.clone()), d)
            .max_diff(&u(&Circuit::seq(gb, fa), d))
            .unwrap();
        let all = Circuit::chain(n + 1, (0..d).map(|k| Circuit::ctrl(k, f.clone())).collect());
        let exh = u(&all, d)
            .max_diff(&identity_on(d, 1).kron(&u(&f, d)))
            .unwrap();
        for (w, x) in worst.iter_mut().zip([compat, comm, exh]) {
            *w = w.max(x);
        }
    }
    let ok = worst.iter().all(|&w| w <= TOL);
    outcome(
        ok,
        format!(
            "100 circuits each; max residual Compat {:.3e}, Comm {:.3e}, Exh {:.3e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn separate_criterion() -> Outcome {
    let mut r = rng(9);
    let (mut worst, mut steps, mut literal_up) = (0.0f64, 0usize, 0usize);
    for d in [2, 3] {
        for _ in 0..200 {
            let n = r.gen_range(1..=3);
            let c = random_on(&mut r, d, n, 6);
            let (out, trace) = separate_traced(&c, d).unwrap();
            worst = worst.max(
                interp_qudit(&out, d)
                    .unwrap()
                    .max_diff(&interp_qudit(&c, d).unwrap())
                    .unwrap(),
            );
            match is_layer_form(&out) {
                Some(f) if f.layers().all(Layer::is_atomic) => {}
                _ => {
                    return outcome(
                        false,
                        format!("output does not parse as atomic layers for {c:?}"),
                    )
                }
            }
            if let Some(s) = trace.iter().find(|s| !s.decreases()) {
                return outcome(
                    false,
                    format!(
                        "measure does not decrease: {:?} -> {:?}",
                        s.parent_term, s.child_term
                    ),
                );
            }
            steps += trace.len();
            literal_up += trace
                .iter()
                .filter(|s| s.child_literal >= s.parent_literal)
                .count();
        }
    }
    outcome(
        worst <= TOL,
        format!(
            "400 circuits, max residual {worst:.3e}, {steps} recursive calls all decreasing the pending-work measure \
             ({literal_up} calls do not decrease the raw (gates, control depth) pair)"
        ),
    )
}

fn angle_relations() -> Outcome {
    let mut r = rng(10);
    let mut worst_so3 = 0.0f64;
    let mut check = |rot: &Rotation3| {
        for conv in [Convention::Zxz, Convention::Xzx] {
            let (a, b, c) = euler_so3(rot, conv);
            let back = match conv {
                Convention::Zxz => Rotation3::zxz(a, b, c),
                Convention::Xzx => Rotation3::xzx(a, b, c),
            };
            worst_so3 = worst_so3.max(back.max_diff(rot));
        }
    };
    for _ in 0..1000 {
        // Uniform unit quaternion.
        let q: Vec<f64> = {
            let v: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / norm).collect()
        };
        let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
        let m = [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - z * w),
                2.0 * (x * z + y * w),
            ],
            [
                2.0 * (x * y + z * w),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - x * w),
            ],
            [
                2.0 * (x * z - y * w),
                2.0 * (y * z + x * w),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ];
        check(&Rotation3::new(m).unwrap());
    }
    for (a, c) in [(0.3, 1.1), (-2.0, 0.4)] {
        check(&Rotation3::zxz(a, 0.0, c));
        check(&Rotation3::zxz(a, PI, c));
        check(&Rotation3::xzx(a, 0.0, c));
        check(&Rotation3::xzx(a, PI, c));
    }
    let mut worst_split = 0.0f64;
    for _ in 0..1000 {
        let (a1, a2, a3) = (
            random_angle(&mut r),
            random_angle(&mut r),
            random_angle(&mut r),
        );
        worst_split = worst_split.max(split_residual(a1, a2, a3, pi_split(a1, a2, a3)).abs());
    }
    let eh = find_schema("EH").unwrap();
    let mut worst_eh = 0.0f64;
    for i in 0..1000 {
        let d = 2 + i % 3;
        let a0 = if i % 10 == 0 {
            [0.0, PI, -PI, FRAC_PI_2, TAU][i / 10 % 5]
        } else {
            random_angle(&mut r)
        };
        let a2 = if i % 7 == 0 {
            [0.0, PI, -FRAC_PI_2][i / 7 % 3]
        } else {
            random_angle(&mut r)
        };
        let i0 = r.gen_range(0..d);
        let j0 = (i0 + 1 + r.gen_range(0..d - 1)) % d;
        let p = Params {
            angles: vec![a0, a2],
            levels: vec![i0, j0],
            rungs: vec![],
            digits: vec![],
            levels2: vec![],
        };
        worst_eh = worst_eh.max(check_instance(&instantiate(&eh, d, &p).unwrap()).unwrap());
    }
    let ok = worst_so3 <= TOL && worst_split <= 1e-12 && worst_eh <= TOL;
    outcome(
        ok,
        format!("SO(3) {worst_so3:.3e} over 1000 + 8 gimbal; pi_split |N| {worst_split:.3e}; EH {worst_eh:.3e} over 1000"),
    )
}

fn random_u2(r: &mut ChaCha8Rng) -> Unitary2 {
    let v: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (
        C64::new(v[0] / norm, v[1] / norm),
        C64::new(v[2] / norm, v[3] / norm),
    );
    let ph = C64::from_polar(1.0, r.gen_range(-PI..PI));
    [[ph * a, -ph * b.conj()], [ph * b, ph * a.conj()]]
}

fn synthesis() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for d in 2..=4 {
        for rung in 0..d - 1 {
            for _ in 0..500 {
                let u = random_u2(&mut r);
                let m = interp_qudit(&synth_two_level(&u, d, rung).unwrap(), d).unwrap();
                let mut want = Matrix::identity(d);
                for i in 0..2 {
                    for j in 0..2 {
                        want.set(rung + i, rung + j, u[i][j]);
                    }
                }
                worst = worst.max(m.max_diff(&want).unwrap());
            }
        }
    }
    let mut cz_exact = true;
    for d in 2..=5 {
        let cz = Circuit::ctrl(0, Circuit::ctrl(0, Circuit::phase(PI)));
        let mut want = Matrix::identity(d * d);
        want.set(0, 0, C64::new(-1.0, 0.0));
        cz_exact &= interp_qudit(&cz, d).unwrap().max_diff(&want).unwrap() == 0.0;
    }
    outcome(
        worst <= 1e-8 && cz_exact,
        format!("two-level max residual {worst:.3e}; CZ_d exact for d 2..5: {cz_exact}"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        (
            "gray-invariants",
            gray_invariants,
            Some(Duration::from_secs(10)),
        ),
        ("fixed-listings", fixed_listings, None),
        (
            "axiom-soundness",
            axiom_soundness,
            Some(Duration::from_secs(300)),
        ),
        ("enc", enc_correct, Some(Duration::from_secs(180))),
        ("retraction", retraction, None),
        ("mimicking", mimicking, None),
        ("locality", locality, None),
        ("control-algebra", control_algebra, None),
        ("separate", separate_criterion, None),
        ("angle-relations", angle_relations, None),
        ("synthesis", synthesis, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run);
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => {
                let in_time = limit.map_or(true, |l| elapsed <= l);
                let note = if in_time {
                    String::new()
                } else {
                    format!(" (over the {:?} budget)", limit.unwrap())
                };
                (o.ok && in_time, format!("{}{note}", o.detail))
            }
            Err(_) => (false, "panicked".to_string()),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {name} [{:.2}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", 11 - failed, 11);
    if failed > 0 {
        std::process::exit(1);
    }
}
