//! One line per acceptance criterion. All arithmetic is exact, so every
//! tolerance below is zero; runtime ceilings are pinned alongside.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use paperlab::{run, CheckConfig, CheckReport, Status};
use paperlab_core::rootsys::{CartanType, RootSystem};
use paperlab_core::weyl::{longest_element, w0, WeylElement};
use serde_json::Value;

/// Exact arithmetic throughout: counts and lengths must match with zero slack.
const TOLERANCE: u64 = 0;

const D4_GF2_CHAMBERS: u64 = 42_525;
const D4_GF3_CHAMBERS: u64 = 2_329_600;
const A5_GF2_CHAMBERS: u64 = 615_195;

/// Criteria that cannot hold as literally stated, with what holds instead.
/// Their FAIL lines stay; the runner asserts the recorded outcome.
const UNATTAINABLE: [u8; 1] = [6];

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Pass,
    Fail,
    Budget,
}

struct Line {
    n: u8,
    verdict: Verdict,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn check(id: &str, cfg: CheckConfig) -> (CheckReport, Duration) {
    let t = Instant::now();
    let r = run(id, &cfg).unwrap_or_else(|e| panic!("{id}: {e}"));
    (r, t.elapsed())
}

fn default_check(id: &str) -> (CheckReport, Duration) {
    check(id, CheckConfig::default())
}

fn val<'a>(r: &'a CheckReport, key: &str) -> &'a Value {
    &r.values.get(key).unwrap_or_else(|| panic!("{}: no value {key}", r.check)).value
}

#[allow(clippy::absurd_extreme_comparisons)]
fn exact(got: u64, want: u64) -> bool {
    got.abs_diff(want) <= TOLERANCE
}

fn failed_on(r: &CheckReport, needle: &str) -> bool {
    r.failures.iter().any(|f| f.contains(needle))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn spectrum_d4(q: u64) -> (bool, String, Duration) {
    let cfg = CheckConfig { cartan_type: Some(CartanType::D(4)), q: Some(q), ..Default::default() };
    let (s, t1) = check("spectrum", cfg.clone());
    let (o, t2) = check("opposition-diagram", cfg);
    let want = if q == 2 { D4_GF2_CHAMBERS } else { D4_GF3_CHAMBERS };
    let chambers = val(&s, "chambers").as_u64().unwrap();
    let ok = s.status == Status::Pass
        && o.status == Status::Pass
        && exact(chambers, want)
        && val(&s, "within_identity_and_s_phi_class") == true
        && val(&o, "diagram") == "{2}";
    (ok, format!("GF({q}): {chambers} chambers, diagram {}", val(&o, "diagram")), t1 + t2)
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut push = |n, verdict, detail: String, elapsed, limit| lines.push(Line { n, verdict, detail, elapsed, limit });

    let (m, t) = default_check("magic-element");
    let ok1 = !failed_on(&m, "u^-1") && val(&m, "maps_psi_plus_to_standard_d4") == true && val(&m, "word_length") == 48;
    push(1, verdict(ok1), "u^-1 gamma_i = a2, a4, a3, a5 and u^-1 Psi+ = Phi+_D4".into(), t, secs(1));

    let (l, t) = default_check("lengths");
    push(2, verdict(l.status == Status::Pass), format!("l(w0) = {}, l(s_phi) = {}", val(&l, "w0_length"), val(&l, "s_phi_length")), t, secs(1));

    let ok3 = val(&m, "psi_positive_roots") == 12 && val(&m, "psi_type") == "D4" && !failed_on(&m, "Psi");
    push(3, verdict(ok3), format!("|Psi+| = {}, type {}", val(&m, "psi_positive_roots"), val(&m, "psi_type").as_str().unwrap_or("?")), t, secs(1));

    let (d, t) = default_check("double-cosets-e7");
    push(4, verdict(d.status == Status::Pass), format!("representative lengths {}", val(&d, "lengths")), t, secs(10));

    let (r, t) = default_check("relations-random");
    let configs = val(&r, "configurations").as_array().unwrap();
    let ok5 = r.status == Status::Pass
        && configs.len() == 6
        && configs.iter().all(|c| {
            c["tallies"].as_array().unwrap().iter().all(|t| t["trials"] == 500 && t["failures"] == 0)
                && c["oracle_pairs"] == 200
                && c["oracle_failures"] == 0
        });
    push(5, verdict(ok5), format!("{} configurations x 500 instances, 200 oracle pairs each", configs.len()), t, secs(300));

    let (w, t) = default_check("weyl-identities");
    let e8_ok = val(&w, "e8_four_reflections")["holds"] == true;
    let polar_ok = val(&w, "s_phi_polar_identity").as_array().unwrap().iter().all(|row| row["holds"] == true);
    let e7_ok = val(&w, "e7_three_reflections")["holds"] == true;
    push(
        6,
        verdict(e8_ok && polar_ok && e7_ok),
        format!("E8 four reflections {e8_ok}, s_phi polar identity {polar_ok}, E7 three reflections = w_E6 w0 {e7_ok}"),
        t,
        secs(5),
    );
    // What does hold in E7: the product is w_D4 w0, in the same E6 double coset as w_E6 w0.
    let e7_recorded = e8_ok
        && polar_ok
        && !e7_ok
        && val(&w, "e7_product_is_w_d4_w0") == true
        && val(&w, "e7_product_in_w_e6_w0_w_e6") == true
        && independent_e7_product_is_w_d4_w0();

    let (g, t) = default_check("g-normal-forms");
    push(7, verdict(g.status == Status::Pass), format!("orders {}", orders(&g)), t, secs(30));

    let (f, t) = default_check("fixed-criterion");
    let fields = val(&f, "fields").as_object().unwrap();
    let ok8 = f.status == Status::Pass && fields.len() == 7;
    push(8, verdict(ok8), format!("fields {:?}", fields.keys().collect::<Vec<_>>()), t, secs(30));

    let (a, t) = default_check("remark76-domesticity");
    let rows = val(&a, "buildings").as_array().unwrap();
    let ok9 = a.status == Status::Pass
        && exact(rows[0]["chambers"].as_u64().unwrap(), A5_GF2_CHAMBERS)
        && rows[0]["domestic"] == true
        && rows[1]["domestic"] == false
        && rows[2]["domestic"] == false;
    push(9, verdict(ok9), format!("A5 domestic over {} chambers; A4, A3 not", rows[0]["chambers"]), t, secs(120));

    let (ok2, d2, t2) = spectrum_d4(2);
    let (ok3q, d3, t3) = spectrum_d4(3);
    push(10, verdict(ok2 && ok3q), format!("{d2}; {d3}"), t2 + t3, secs(600));

    let (dc, t) = default_check("density-cosets");
    push(11, verdict(dc.status == Status::Pass), "E8 and E7 corollary cosets match".into(), t, secs(1));

    let (fi, t) = default_check("f4-involutions");
    push(12, verdict(fi.status == Status::Pass), format!("|W(F4)| = {}", val(&fi, "order")), t, secs(5));

    let (rc, t) = default_check("remark77-classes");
    push(13, verdict(rc.status == Status::Pass), format!("w_D4 minimal shift length {}", val(&rc, "w_d4_min_shift_length")), t, secs(30));

    let (lm, t) = default_check("lemma61");
    push(14, verdict(lm.status == Status::Pass), "five cases witnessed over GF(3), GF(4), GF(5); GF(3) searches agree".into(), t, secs(60));

    let (oc, t) = default_check("originalform-cell");
    let v15 = match oc.status {
        Status::Pass => Verdict::Pass,
        Status::Fail => Verdict::Fail,
        Status::Budget => Verdict::Budget,
    };
    let detail = match oc.values.get("violated_cell") {
        Some(v) => format!("theta1 cell length {}, violated cell length {}", val(&oc, "theta1_cell")["length"], v.value["length"]),
        None => oc.failures.join("; "),
    };
    push(15, v15, detail, t, secs(600));

    let mut ok = true;
    for l in &lines {
        let slow = l.elapsed > l.limit;
        let word = match (l.verdict, slow) {
            (Verdict::Budget, _) => "BUDGET",
            (Verdict::Pass, false) => "PASS",
            _ => "FAIL",
        };
        println!(
            "criterion {:>2}: {word:<6} {:>8.2}s (limit {}s)  {}",
            l.n,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            l.detail
        );
        let expected_failure = UNATTAINABLE.contains(&l.n) && l.verdict == Verdict::Fail && e7_recorded && !slow;
        ok &= match l.verdict {
            Verdict::Pass => !slow,
            // Excluded from the default gate; only a real failure counts.
            Verdict::Budget => l.n == 15,
            Verdict::Fail => expected_failure,
        };
        if expected_failure {
            println!("              recorded: in W(E7) the three reflections multiply to w_D4 w0, not w_E6 w0");
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failure");
        ExitCode::FAILURE
    }
}

fn orders(r: &CheckReport) -> String {
    val(r, "subgroups").as_array().unwrap().iter().map(|s| format!("{}={}", s["field"].as_str().unwrap(), s["order"])).collect::<Vec<_>>().join(", ")
}

/// Recomputes the E7 product from the root system directly.
fn independent_e7_product_is_w_d4_w0() -> bool {
    let rs = RootSystem::build(CartanType::E7).unwrap();
    let roots = [rs.highest_root(), rs.highest_root_of(&[1, 2, 3, 4, 5, 6]).unwrap(), rs.simple(6)];
    let prod = roots.iter().fold(WeylElement::identity(&rs), |acc, &r| acc.multiply(&WeylElement::reflection(&rs, r)));
    let wd4w0 = longest_element(&rs, &[1, 2, 3, 4]).multiply(&w0(&rs));
    let we6w0 = longest_element(&rs, &[0, 1, 2, 3, 4, 5]).multiply(&w0(&rs));
    prod == wd4w0 && prod != we6w0 && prod.length() == 51 && we6w0.length() == 27
}
