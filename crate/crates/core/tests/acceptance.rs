//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use qrs_core::families::{big_qhermite, change_base_c};
use qrs_core::idverify::{verify, verify_all};
use qrs_core::qcore::{rat, ExactScalar, MultiPoly};
use qrs_core::quadrature::{askey_wilson_sides, closed_form_check, ortho_matrix_deviation, CLOSED_IDS};
use qrs_core::report::IdentityReport;

type Check = Result<String, String>;

fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// Runs one case and enforces an optional wall-clock budget.
fn run(id: &str, order: u32, kv: &[(&str, &str)], budget: Option<Duration>) -> Result<(IdentityReport, Duration), String> {
    let start = Instant::now();
    let r = verify(id, order, &params(kv), 0).map_err(|e| format!("{id}: {e}"))?;
    let took = start.elapsed();
    if !r.passed() {
        return Err(format!("{id} {kv:?}: {}", r.witness.as_deref().unwrap_or("failed")));
    }
    if let Some(b) = budget {
        if took > b {
            return Err(format!("{id} {kv:?}: {:.1}s over the {:.0}s budget", took.as_secs_f64(), b.as_secs_f64()));
        }
    }
    Ok((r, took))
}

fn exact_pass(r: &IdentityReport) -> Result<(), String> {
    let s = serde_json::to_value(r.status).unwrap();
    if s == "exact-pass" {
        Ok(())
    } else {
        Err(format!("{}: status {s}, expected exact-pass", r.id))
    }
}

fn slowest(times: &[(String, Duration)]) -> String {
    let (id, t) = times.iter().max_by_key(|(_, t)| *t).unwrap();
    format!("slowest {id} {:.2}s", t.as_secs_f64())
}

fn c1() -> Check {
    let mut times = vec![];
    for q in ["1/2", "1/3", "2/5"] {
        let (r, t) = run("mehler-brs", 8, &[("q", q)], Some(Duration::from_secs(60)))?;
        exact_pass(&r)?;
        times.push((format!("q={q}"), t));
    }
    Ok(format!("mehler-brs order 8, q in {{1/2,1/3,2/5}}; {}", slowest(&times)))
}

fn c2() -> Check {
    let mut times = vec![];
    for q in ["1/2", "1/3", "2/5"] {
        let (r, t) = run("rogers-brs", 8, &[("q", q)], None)?;
        exact_pass(&r)?;
        times.push((format!("rogers-brs q={q}"), t));
        let (r, t) = run("rogers2-brs", 7, &[("q", q)], None)?;
        exact_pass(&r)?;
        times.push((format!("rogers2-brs q={q}"), t));
    }
    Ok(format!("rogers-brs order 8, rogers2-brs order 7; {}", slowest(&times)))
}

fn c3() -> Check {
    let ids = ["linear-brs-double", "linear-brs-simple", "linear-mixed", "hlm-relation", "askey-ismail", "mixed-identity"];
    let mut times = vec![];
    for id in ids {
        for q in ["1/2", "1/3"] {
            let (r, t) = run(id, 6, &[("q", q)], Some(Duration::from_secs(10)))?;
            exact_pass(&r)?;
            times.push((format!("{id} q={q}"), t));
        }
    }
    Ok(format!("{} identities, n,m <= 6, q in {{1/2,1/3}}; {}", ids.len(), slowest(&times)))
}

fn c4() -> Check {
    for id in ["mehler-reduction", "rogers-reduction", "linear-reduction"] {
        for q in ["1/2", "1/3"] {
            exact_pass(&run(id, 8, &[("q", q)], None)?.0)?;
        }
    }
    Ok("y = 0 reductions of mehler-brs, rogers-brs and the linearizations at order 8".into())
}

fn c5() -> Check {
    for (p, q) in [("1/3", "1/2"), ("-2/5", "2/5")] {
        exact_pass(&run("cb-hermite", 8, &[("p", p), ("q", q)], None)?.0)?;
    }
    for (p, q) in [(rat(1, 3), rat(1, 2)), (rat(-2, 5), rat(2, 5))] {
        let c = change_base_c(2, 1, &p, &q);
        if c != &p - &q {
            return Err(format!("c_{{2,0}}({p},{q}) = {c}, expected {}", &p - &q));
        }
    }
    Ok("n <= 8, (p,q) in {(1/3,1/2),(-2/5,2/5)}; c_{2,0} = p - q".into())
}

fn c6() -> Check {
    exact_pass(&run("cb-big", 6, &[("p", "1/3"), ("q", "1/2"), ("a", "1/4")], None)?.0)?;
    // 4x^2 - 2(1+p)ax + pa^2 + p - 1
    let (p, a) = (rat(1, 3), rat(1, 4));
    let one = ExactScalar::from_integer(1.into());
    let want = MultiPoly::monomial("x", 2, rat(4, 1))
        .add_ref(&MultiPoly::monomial("x", 1, rat(-2, 1) * (&one + &p) * &a))
        .add_ref(&MultiPoly::constant(&p * &a * &a + &p - &one));
    let got = big_qhermite(2, &MultiPoly::constant(a), &p);
    if got.sub_ref(&want).trim().is_zero() {
        Ok("n <= 6 at a = 1/4, (p,q) = (1/3,1/2); H_2 witness matches".into())
    } else {
        Err(format!("H_2(x;1/4|1/3) = {got}, expected {want}"))
    }
}

fn c7() -> Check {
    for q in ["1/2", "1/3"] {
        exact_pass(&run("lemma-2.2", 8, &[("q", q)], None)?.0)?;
        exact_pass(&run("zhang-wang", 8, &[("q", q)], None)?.0)?;
        exact_pass(&run("zhang-wang", 8, &[("q", q), ("w", "0")], None)?.0)?;
        exact_pass(&run("lemma-2.3", 8, &[("q", q)], None)?.0)?;
    }
    Ok("lemma-2.2, zhang-wang (and w = 0), lemma-2.3 at order 8".into())
}

fn c8() -> Check {
    let mut worst: f64 = 0.0;
    for id in ["nonsym-poisson", "phi32-transform"] {
        let (r, _) = run(id, 0, &[("q", "0.3"), ("tol", "1e-10")], None)?;
        if let qrs_core::report::Residual::Value(v) = r.residual {
            worst = worst.max(v);
        }
    }
    Ok(format!("5 draws at q = 0.3, max residual {worst:.2e} <= 1e-10"))
}

fn c9() -> Check {
    let start = Instant::now();
    let (lhs, rhs) = askey_wilson_sides(0.3, 0.25, 0.2, 0.1, 0.5, 1e-10).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let rel = (lhs - rhs).abs() / rhs.abs();
    if rel > 1e-8 || took > Duration::from_secs(5) {
        return Err(format!("askey-wilson relative error {rel:.2e} in {:.2}s", took.as_secs_f64()));
    }
    let (dev, (n, m)) = ortho_matrix_deviation(5, 0.3, 0.4, 1e-10).map_err(|e| e.to_string())?;
    if dev > 1e-8 {
        return Err(format!("ortho matrix deviation {dev:.2e} at ({n},{m})"));
    }
    Ok(format!(
        "askey-wilson rel {rel:.2e} in {:.3}s; ortho n,m <= 5 max deviation {dev:.2e}",
        took.as_secs_f64()
    ))
}

fn c10() -> Check {
    let mut worst: f64 = 0.0;
    for id in CLOSED_IDS {
        let r = closed_form_check(id, 0.3, 0.1, 0.2, 1e-7).ok_or_else(|| format!("{id}: no closed form"))?;
        if !r.passed() {
            return Err(format!("{id}: {}", r.witness.as_deref().unwrap_or("failed")));
        }
        if let qrs_core::report::Residual::Value(v) = r.residual {
            worst = worst.max(v);
        }
    }
    Ok(format!("{} closed forms at q = 0.3, a = 0.1, t = 0.2, max residual {worst:.2e}", CLOSED_IDS.len()))
}

fn c11() -> Check {
    let start = Instant::now();
    let a = verify_all(Some(6), 0);
    let took = start.elapsed();
    let b = verify_all(Some(6), 0);
    let failed: Vec<_> = a.iter().filter(|r| !r.passed()).map(|r| r.id.clone()).collect();
    if !failed.is_empty() {
        return Err(format!("failures: {}", failed.join(", ")));
    }
    if took > Duration::from_secs(600) {
        return Err(format!("took {:.0}s", took.as_secs_f64()));
    }
    let (ja, jb) = (serde_json::to_string_pretty(&a).unwrap(), serde_json::to_string_pretty(&b).unwrap());
    if ja != jb {
        return Err("JSON differs between runs".into());
    }
    Ok(format!("{} cases in {:.2}s, JSON identical across runs", a.len(), took.as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("mehler-brs exact", c1),
        ("rogers-brs and rogers2-brs exact", c2),
        ("linearization identities exact", c3),
        ("y = 0 reductions", c4),
        ("change of base, q-Hermite", c5),
        ("change of base, big q-Hermite", c6),
        ("operator lemmas", c7),
        ("Poisson kernel numerics", c8),
        ("quadrature", c9),
        ("closed product formulas", c10),
        ("verify-all order 6", c11),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
