//! Acceptance run: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

use otc::{field_and_subgroup, parse_input, spectrum_config, RunFlags};
use otc_core::characters::enumerate_spectrum;
use otc_core::cohomology::{betti_numbers, twisted_betti, ThetaClass};

const CUBIC_BUDGET: Duration = Duration::from_secs(1);
const QUINTIC_BUDGET: Duration = Duration::from_secs(5);
const SEPARATION_BITS: u64 = 256;
const ORACLE_BITS: &str = "512";
const CORPUS: [&str; 4] = ["cubic2", "quintic2", "plastic", "septic2"];

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

fn otc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otc"))
        .args(args)
        .output()
        .expect("run otc")
}

fn compute(name: &str, extra: &[&str]) -> Result<(Value, Duration), String> {
    let path = corpus(name);
    let mut args = vec!["compute", path.to_str().unwrap(), "--quiet"];
    args.extend_from_slice(extra);
    let start = Instant::now();
    let out = otc(&args);
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "{name}: exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let v = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((v, elapsed))
}

fn ints(v: &Value) -> Vec<u64> {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_u64).collect())
        .unwrap_or_default()
}

fn twisted(report: &Value, label: &str) -> Vec<u64> {
    report["twisted"]
        .as_array()
        .and_then(|a| a.iter().find(|t| t["label"] == label))
        .map(|t| ints(&t["betti"]))
        .unwrap_or_default()
}

fn expect(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example_p3() -> Result<String, String> {
    let (r, t) = compute("cubic2", &["--precision", "128"])?;
    let sig = &r["field"]["signature"];
    expect(sig["s"] == 1 && sig["t"] == 1, format!("signature {sig}"))?;
    expect(ints(&r["rho"]["values"]) == [1, 0, 0, 1], format!("rho {}", r["rho"]["values"]))?;
    expect(ints(&r["betti"]["values"]) == [1, 1, 0, 1, 1], format!("betti {}", r["betti"]["values"]))?;
    expect(t < CUBIC_BUDGET, format!("took {t:?}"))?;
    Ok(format!("rho (1,0,0,1), betti [1,1,0,1,1], {t:.2?} < {CUBIC_BUDGET:?}"))
}

fn example_p5() -> Result<String, String> {
    let (r, t) = compute("quintic2", &[])?;
    expect(ints(&r["rho"]["values"]) == [1, 0, 0, 0, 0, 1], format!("rho {}", r["rho"]["values"]))?;
    expect(
        ints(&r["betti"]["values"]) == [1, 1, 0, 0, 0, 1, 1],
        format!("betti {}", r["betti"]["values"]),
    )?;
    let certs: Vec<&Value> = r["rho"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["trivial"] == true)
        .map(|v| &v["certificate"]["kind"])
        .collect();
    expect(
        certs.iter().all(|k| *k == "exact_certified"),
        format!("certificates {certs:?}"),
    )?;
    expect(t < QUINTIC_BUDGET, format!("took {t:?}"))?;
    Ok(format!("rho (1,0,0,0,0,1), betti [1,1,0,0,0,1,1], exact, {t:.2?} < {QUINTIC_BUDGET:?}"))
}

fn lee_twisted() -> Result<String, String> {
    let (r, _) = compute("cubic2", &[])?;
    let b = twisted(&r, "lee");
    expect(b == [0, 0, 1, 1, 0], format!("lee-twisted betti {b:?}"))?;
    Ok("lee-twisted betti [0,0,1,1,0]".into())
}

fn lck_discrimination() -> Result<String, String> {
    let (c, _) = compute("cubic2", &[])?;
    expect(c["lck"]["admissible"] == true, "cubic2 not admissible")?;
    let (q, _) = compute("quintic2", &[])?;
    expect(q["lck"]["admissible"] == false, "quintic2 admissible")?;
    let check = &q["lck"]["checks"][0];
    expect(check["method"] == "ball_separation", format!("method {}", check["method"]))?;
    let bits = check["bits"].as_u64().unwrap_or(u64::MAX);
    expect(bits <= SEPARATION_BITS, format!("separated at {bits} bits"))?;
    Ok(format!("p=3 admissible, p=5 rejected by separation at {bits} <= {SEPARATION_BITS} bits"))
}

fn chern_range() -> Result<String, String> {
    let (c, _) = compute("cubic2", &[])?;
    let (q, _) = compute("quintic2", &[])?;
    expect(c["chern_vanishing"] == 1, format!("p=3 gives {}", c["chern_vanishing"]))?;
    expect(q["chern_vanishing"] == 2, format!("p=5 gives {}", q["chern_vanishing"]))?;
    Ok("p=3 -> 1, p=5 -> 2".into())
}

fn property_suite() -> Result<String, String> {
    let mut runs: Vec<(&str, Vec<&str>)> = CORPUS.iter().map(|n| (*n, vec![])).collect();
    runs.push(("cubic2_theta", vec!["--theta-from-input"]));
    let mut checked = 0;
    for (name, extra) in runs {
        let (r, _) = compute(name, &extra)?;
        for c in r["consistency"]["checks"].as_array().unwrap() {
            expect(
                c["status"] != "fail",
                format!("{name}: {} {}", c["name"], c["detail"]),
            )?;
            if c["status"] == "pass" {
                checked += 1;
            }
        }
        let path = corpus(name);
        let out = otc(&["verify", path.to_str().unwrap()]);
        expect(out.status.success(), format!("{name}: verify exit {:?}", out.status.code()))?;
    }
    let n_fields = CORPUS.len();
    Ok(format!("{checked} identities passed on {n_fields} fields"))
}

fn oracle_equivalence() -> Result<String, String> {
    let mut subsets = 0;
    for name in CORPUS {
        let path = corpus(name);
        let out = otc(&["oracle", path.to_str().unwrap(), "--bits", ORACLE_BITS]);
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("{name}: {e}"))?;
        expect(
            out.status.success() && v["comparison"]["agree"] == true,
            format!("{name}: {}", v["comparison"]),
        )?;
        subsets += v["subsets"].as_u64().unwrap_or(0);
    }
    Ok(format!("0 disagreements over {subsets} subsets at {ORACLE_BITS} bits"))
}

fn integral_twist() -> Result<String, String> {
    let text = std::fs::read_to_string(corpus("cubic2")).map_err(|e| e.to_string())?;
    let spec = parse_input(&text).map_err(|e| e.to_string())?;
    let config = spectrum_config(&spec, &RunFlags::default());
    let (field, subgroup) = field_and_subgroup(&spec, config.precision).map_err(|e| e.to_string())?;
    let de_rham = betti_numbers(
        &enumerate_spectrum(&field, &subgroup, &config).map_err(|e| e.to_string())?,
        field.s(),
    );
    let theta = ThetaClass::IntegralTwist(vec![1]);
    let (b, sp) = twisted_betti(&field, &subgroup, &theta, &config).map_err(|e| e.to_string())?;
    expect(!sp.has_undecided(), "undecided verdicts")?;
    expect(
        b.values == de_rham.values,
        format!("{:?} != {:?}", b.values, de_rham.values),
    )?;
    Ok(format!("twisted {:?} = de Rham", b.values))
}

fn determinism() -> Result<String, String> {
    for name in CORPUS {
        let path = corpus(name);
        let p = path.to_str().unwrap();
        let a = otc(&["--workers", "1", "compute", p]);
        let b = otc(&["--workers", "4", "compute", p]);
        expect(a.status.success() && b.status.success(), format!("{name}: run failed"))?;
        expect(a.stdout == b.stdout, format!("{name}: reports differ"))?;
    }
    Ok(format!("{} inputs byte-identical with 1 and 4 workers", CORPUS.len()))
}

type Criterion = (&'static str, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("example p=3", example_p3),
        ("example p=5", example_p5),
        ("lee-twisted dimensions", lee_twisted),
        ("lck discrimination", lck_discrimination),
        ("chern range", chern_range),
        ("property suite", property_suite),
        ("oracle equivalence", oracle_equivalence),
        ("integral-twist identity", integral_twist),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
