//! Check suites behind the command line: model validation, random form
//! decomposition and adapted connection construction.

use std::time::Instant;

use crate::batch;
use crate::clifford::CliffordRep;
use crate::connection::{
    b20_minus_b11a, bianchi_formula, fixed_slot_residuals, reeb_reeb_torsion, trace_formula,
    AdaptedData, ConnectionField,
};
use crate::error::{Error, Result};
use crate::forms::{
    self, bianchi, decompose, eta_wedge, inv_b_11a, inv_b_20, minus_part, mop, norm, phi_inv,
    phi_iso, plus_part, random_11a, random_20, random_plus, random_skew_endo, random_sym_endo,
    relative, trace, wedge_eta_endo, VectorValuedTwoForm,
};
use crate::linalg::{max_abs, max_abs_vec, nan_max};
use crate::model::LieContactModel;
use crate::random;
use crate::report::{CheckRecord, CheckSuiteResult};
use crate::space::ContactMetricSpace;

/// Model invariants, then, if they hold, the Levi-Civita, `nabla J` and
/// Nijenhuis / `nabla F` identities.
pub fn validate_suite(model: &LieContactModel, tol: f64) -> CheckSuiteResult {
    let start = Instant::now();
    let mut checks = model.validity(tol).checks;
    let valid = checks.iter().all(|c| c.pass);
    if valid {
        checks.extend(model.levi_civita_checks(tol));
        checks.extend(model.nabla_j_checks(tol));
        checks.extend(model.nf_checks(tol));
    }
    let result = CheckSuiteResult::new(model.name(), checks, start.elapsed())
        .with_property("dim", model.dim());
    if valid {
        result.with_property("nijenhuis_02_max", model.nijenhuis_02().max_abs())
    } else {
        result
    }
}

/// Worst relative violations over one batch of random forms.
#[derive(Clone, Copy, Debug, Default)]
struct DecomposeWorst {
    round_trip: f64,
    membership: f64,
    eigenspace: f64,
    trace_of_bianchi: f64,
    b_m_third: f64,
    splitting_minus: f64,
    splitting_plus: f64,
    inv_b_20: f64,
    inv_b_11a: f64,
    phi_iso: f64,
    b_endo_sym: f64,
    b_endo_skew: f64,
}

impl DecomposeWorst {
    fn merge(self, o: Self) -> Self {
        Self {
            round_trip: nan_max(self.round_trip, o.round_trip),
            membership: nan_max(self.membership, o.membership),
            eigenspace: nan_max(self.eigenspace, o.eigenspace),
            trace_of_bianchi: nan_max(self.trace_of_bianchi, o.trace_of_bianchi),
            b_m_third: nan_max(self.b_m_third, o.b_m_third),
            splitting_minus: nan_max(self.splitting_minus, o.splitting_minus),
            splitting_plus: nan_max(self.splitting_plus, o.splitting_plus),
            inv_b_20: nan_max(self.inv_b_20, o.inv_b_20),
            inv_b_11a: nan_max(self.inv_b_11a, o.inv_b_11a),
            phi_iso: nan_max(self.phi_iso, o.phi_iso),
            b_endo_sym: nan_max(self.b_endo_sym, o.b_endo_sym),
            b_endo_skew: nan_max(self.b_endo_skew, o.b_endo_skew),
        }
    }
}

fn decompose_one(space: &ContactMetricSpace, seed: u64, index: usize) -> Result<DecomposeWorst> {
    let mut rng = random::rng_stream(seed, index as u64 + 1);
    let n = space.dim();
    let b = VectorValuedTwoForm::random(n, &mut rng);
    let scale = norm(space, &b);
    let d = decompose(space, &b);
    let mut w = DecomposeWorst {
        round_trip: relative((&d.reassemble(space) - &b).max_abs(), scale),
        ..Default::default()
    };
    w.membership = d
        .membership_violations(space)
        .into_iter()
        .fold(0.0, |acc, (_, v)| nan_max(acc, relative(v, scale)));

    // M acts by +1 on (1,1) and xi+, by -1 on (2,0) + (0,2) and xi-
    let parts = d.embedded(space);
    let signs = [-1.0, 1.0, -1.0, 1.0, -1.0];
    let mut eig = 0.0_f64;
    for (part, sign) in parts.iter().zip(signs) {
        eig = nan_max(eig, (&mop(space, part) - &(part * sign)).max_abs());
    }
    w.eigenspace = relative(eig, scale);

    let bb = bianchi(&b);
    w.trace_of_bianchi = relative(max_abs_vec(&trace(space, &bb.embed())), scale);

    // (b B)^- = b(B^{0,2}), (b B)^+ = b(B^{1,1} + B^{2,0}), both on the contact distribution
    let bc = forms::contact_part(space, &b);
    let bbc = bianchi(&bc);
    w.splitting_minus = relative(
        (&minus_part(space, &bbc) - &bianchi(&d.c02)).max_abs(),
        scale,
    );
    w.splitting_plus = relative(
        (&plus_part(space, &bbc) - &bianchi(&(&d.c11 + &d.c20))).max_abs(),
        scale,
    );

    if space.m() >= 2 {
        let omega = random_plus(space, &mut rng);
        let os = norm(space, &omega.embed());
        w.b_m_third = relative(
            (&bianchi(&mop(space, &omega.embed())) - &(&omega * (1.0 / 3.0))).max_abs(),
            os,
        );

        let b20 = random_20(space, &mut rng);
        let s20 = norm(space, &b20);
        let back = inv_b_20(space, &bianchi(&b20))?;
        let forward = bianchi(&inv_b_20(space, &omega)?);
        w.inv_b_20 = relative((&back - &b20).max_abs(), s20)
            .max(relative((&forward - &omega).max_abs(), os));

        let a = random_11a(space, &mut rng);
        let sa = norm(space, &a);
        let back = inv_b_11a(space, &bianchi(&a))?;
        let forward = bianchi(&inv_b_11a(space, &omega)?);
        w.inv_b_11a =
            relative((&back - &a).max_abs(), sa).max(relative((&forward - &omega).max_abs(), os));

        let there = phi_iso(space, &b20)?;
        let back = phi_inv(space, &there)?;
        let again = phi_iso(space, &phi_inv(space, &a)?)?;
        w.phi_iso =
            relative((&back - &b20).max_abs(), s20).max(relative((&again - &a).max_abs(), sa));
    }

    let phi = random_sym_endo(space, &mut rng);
    w.b_endo_sym = relative(
        bianchi(&wedge_eta_endo(space, &phi)).max_abs(),
        max_abs(&phi),
    );
    let psi = random_skew_endo(space, &mut rng);
    let lhs = bianchi(&wedge_eta_endo(space, &psi));
    let xi = space.xi();
    let p = space.contact_projection();
    let gpsi = p.transpose() * space.g() * &psi * p;
    let mut skew = 0.0_f64;
    for x in 0..n {
        for y in 0..n {
            let l: f64 = (0..n).map(|a| xi[a] * lhs.get(a, x, y)).sum();
            skew = nan_max(skew, (l - gpsi[(y, x)] * 2.0 / 3.0).abs());
        }
    }
    w.b_endo_skew = relative(skew, max_abs(&psi));
    Ok(w)
}

/// Runs the decomposition identities on `count` random forms over
/// `random_space((dim - 1) / 2, seed)`.
pub fn decompose_suite(dim: usize, seed: u64, count: usize, tol: f64) -> Result<CheckSuiteResult> {
    if dim < 3 || dim.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "dimension must be odd and at least 3, got {dim}"
        )));
    }
    let start = Instant::now();
    let space = ContactMetricSpace::random((dim - 1) / 2, seed);
    let results = batch::map(count, |i| decompose_one(&space, seed, i));
    let mut worst = DecomposeWorst::default();
    for r in results {
        worst = worst.merge(r?);
    }
    let vacuous = space.m() < 2;
    let three = |id: &str, anchor: &str, v: f64| {
        if vacuous {
            CheckRecord::vacuous(id, anchor, tol)
        } else {
            CheckRecord::new(id, anchor, v, tol)
        }
    };
    let checks = vec![
        CheckRecord::new(
            "round_trip",
            "sum of the eight parts = B",
            worst.round_trip,
            tol,
        ),
        CheckRecord::new(
            "membership",
            "each part satisfies its defining relation",
            worst.membership,
            tol,
        ),
        CheckRecord::new(
            "eigenspace",
            "M = +1 on (1,1), xi+; M = -1 on (2,0), (0,2), xi-",
            worst.eigenspace,
            tol,
        ),
        CheckRecord::new(
            "trace_of_bianchi",
            "tr(b B) = 0",
            worst.trace_of_bianchi,
            tol,
        ),
        CheckRecord::new(
            "splitting_minus",
            "(b B)^- = b(B^{0,2})",
            worst.splitting_minus,
            tol,
        ),
        CheckRecord::new(
            "splitting_plus",
            "(b B)^+ = b(B^{1,1} + B^{2,0})",
            worst.splitting_plus,
            tol,
        ),
        three(
            "b_m_third",
            "b M omega = omega / 3 on Omega^+",
            worst.b_m_third,
        ),
        three(
            "inv_b_20",
            "(b on Omega^{2,0})^-1 = 3/2 (omega - M omega)",
            worst.inv_b_20,
        ),
        three(
            "inv_b_11a",
            "(b on Omega^{1,1}_a)^-1 = 3/4 (omega + M omega)",
            worst.inv_b_11a,
        ),
        three(
            "phi_iso",
            "phi(B) = 3/4 (b B + M b B), phi^-1(A) = 3/2 (b A - M b A)",
            worst.phi_iso,
        ),
        CheckRecord::new(
            "b_endo_sym",
            "b(eta ^ Phi) = 0 for symmetric Phi",
            worst.b_endo_sym,
            tol,
        ),
        CheckRecord::new(
            "b_endo_skew",
            "b(eta ^ Psi)(xi, X, Y) = 2/3 g(Y, Psi X) for skew Psi",
            worst.b_endo_skew,
            tol,
        ),
    ];
    Ok(
        CheckSuiteResult::new(format!("random{dim}-{seed}"), checks, start.elapsed())
            .with_property("dim", dim)
            .with_property("count", count)
            .with_property("seed", seed),
    )
}

/// Where the free data of a connection comes from.
#[derive(Clone, Debug)]
pub enum DataSource {
    Given(AdaptedData),
    Random(u64),
    TanakaWebster,
    LcEquivalent,
}

impl DataSource {
    pub fn label(&self) -> String {
        match self {
            Self::Given(_) => "file".into(),
            Self::Random(seed) => format!("random-{seed}"),
            Self::TanakaWebster => "tw".into(),
            Self::LcEquivalent => "lc-equivalent".into(),
        }
    }

    pub fn resolve(&self, space: &ContactMetricSpace) -> AdaptedData {
        match self {
            Self::Given(d) => d.clone(),
            Self::Random(seed) => AdaptedData::random(space, &mut random::rng(*seed)),
            Self::TanakaWebster => AdaptedData::tanaka_webster(space.dim()),
            Self::LcEquivalent => AdaptedData::lc_equivalent(space),
        }
    }
}

/// Builds the adapted connection with the given data and checks adaptedness,
/// extraction, the fixed torsion slots, the trace and Bianchi formulas,
/// niceness, the CR predicate and the Dirac difference endomorphism.
///
/// Data outside the admissible subspaces yields a failing report naming the slot.
pub fn connection_suite(
    model: &LieContactModel,
    source: &DataSource,
    tol: f64,
) -> Result<CheckSuiteResult> {
    let start = Instant::now();
    let space = model.space();
    let name = format!("{}:{}", model.name(), source.label());
    let data = source.resolve(space);
    let membership: Vec<CheckRecord> = data
        .violations(space)
        .into_iter()
        .map(|(slot, v)| {
            CheckRecord::new(
                format!("data_{slot}"),
                format!("{slot} lies in its admissible subspace"),
                v,
                forms::MEMBERSHIP_TOL,
            )
        })
        .collect();
    if membership.iter().any(|c| !c.pass) {
        return Ok(CheckSuiteResult::new(name, membership, start.elapsed()));
    }
    let mut checks = membership;

    let conn = ConnectionField::adapted(model, &data)?;
    let t = conn.torsion();
    let report = conn.check_adapted(tol);
    let adapted = report.passed();
    checks.extend(report.checks.into_iter().map(|mut c| {
        c.id = format!("adapted_{}", c.id);
        c
    }));
    if !adapted {
        return Ok(CheckSuiteResult::new(name, checks, start.elapsed()));
    }

    let back = conn.extract_data()?;
    checks.push(CheckRecord::new(
        "extract_round_trip",
        "((b T)^+, T^{1,1}_s, T^1_-) = (omega, B, Phi)",
        back.max_abs_diff(&data),
        tol,
    ));
    for (slot, v) in fixed_slot_residuals(model, t) {
        let anchor = match slot {
            "T02" => "T^{0,2} = N^{0,2}",
            "T2+" => "T^2_+ = d eta",
            "T2-" => "T^2_- = 0",
            "T1+" => "T^1_+ = -1/2 J L_xi J",
            _ => "T^1_R = 0",
        };
        checks.push(CheckRecord::new(format!("fixed_{slot}"), anchor, v, tol));
    }
    checks.push(CheckRecord::new(
        "uniqueness_b20_b11a",
        "b(T^{2,0} - T^{1,1}_a) = 0",
        b20_minus_b11a(space, t).max_abs(),
        tol,
    ));
    checks.push(CheckRecord::new(
        "uniqueness_reeb",
        "T(xi; xi, X) = 0",
        reeb_reeb_torsion(space, t),
        tol,
    ));
    let tr = max_abs_vec(&(conn.trace_torsion() - trace_formula(space, &data)));
    checks.push(CheckRecord::new(
        "trace_formula",
        "tr T = -3/8 tr M omega + tr B",
        tr,
        tol,
    ));
    let bt = (&conn.bianchi_torsion() - &bianchi_formula(model, &data)).max_abs();
    checks.push(CheckRecord::new(
        "bianchi_formula",
        "b T = omega + 1/3 eta ^ d eta + b(eta ^ Phi)",
        bt,
        tol,
    ));
    let tr_a = max_abs_vec(&(trace(space, conn.potential()) + conn.trace_torsion()));
    checks.push(CheckRecord::new(
        "potential_trace",
        "tr A = -tr T",
        tr_a,
        tol,
    ));

    let rep = CliffordRep::build(model.m());
    let mut result_props: Vec<(&str, serde_json::Value)> = Vec::new();
    let diff = rep.dirac_difference(&conn)?;
    result_props.push(("dirac_difference_max", diff.max_abs().into()));
    match rep.is_nice(&conn) {
        Ok(nice) => {
            checks.push(CheckRecord::flag(
                "nice_consistent",
                "tr T = 0 <=> tr B = 3/8 tr M omega <=> D symmetric",
                true,
            ));
            result_props.push(("nice", nice.into()));
        }
        Err(Error::Inconsistent { .. }) => {
            checks.push(CheckRecord::flag(
                "nice_consistent",
                "tr T = 0 <=> tr B = 3/8 tr M omega <=> D symmetric",
                false,
            ));
        }
        Err(e) => return Err(e),
    }
    match conn.is_cr_connection() {
        Ok(cr) => {
            checks.push(CheckRecord::flag(
                "cr_consistent",
                "T(C10, C10) = 0 <=> omega = 0",
                true,
            ));
            result_props.push(("cr", cr.into()));
        }
        Err(Error::Inconsistent { .. }) => {
            checks.push(CheckRecord::flag(
                "cr_consistent",
                "T(C10, C10) = 0 <=> omega = 0",
                false,
            ));
        }
        // CR connections are only defined when N^{0,2} = 0
        Err(Error::Precondition(_)) => result_props.push(("cr", serde_json::Value::Null)),
        Err(e) => return Err(e),
    }
    match source {
        DataSource::TanakaWebster => {
            let quarter = rep
                .c_threeform_in_frame(space, &eta_wedge(space, &model.deta()))?
                .scale(0.25);
            checks.push(CheckRecord::new(
                "dirac_tanaka_webster",
                "D(nabla) - D(nabla^g) = 1/4 c(eta ^ d eta)",
                diff.distance(&quarter),
                tol,
            ));
        }
        DataSource::LcEquivalent => {
            checks.push(CheckRecord::new(
                "dirac_lc_equivalent",
                "D(nabla) = D(nabla^g)",
                diff.max_abs(),
                tol,
            ));
        }
        _ => {}
    }
    let mut result = CheckSuiteResult::new(name, checks, start.elapsed());
    for (k, v) in result_props {
        result = result.with_property(k, v);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{heisenberg, su2};

    #[test]
    fn decompose_suite_passes() {
        for dim in [3, 5, 7] {
            let r = decompose_suite(dim, 1, 20, 1e-10).unwrap();
            assert!(r.pass, "{}", r.summary());
            assert_eq!(r.check("b_m_third").unwrap().vacuous, dim == 3);
        }
        assert!(decompose_suite(4, 1, 1, 1e-10).is_err());
    }

    #[test]
    fn decompose_suite_is_deterministic() {
        let a = decompose_suite(5, 3, 16, 1e-10).unwrap().to_json();
        let b = decompose_suite(5, 3, 16, 1e-10).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn connection_suite_on_su2() {
        let r = connection_suite(&su2(), &DataSource::TanakaWebster, 1e-10).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert_eq!(r.properties["nice"], true);
        assert_eq!(r.properties["cr"], true);
    }

    #[test]
    fn connection_suite_names_bad_slot() {
        let model = heisenberg(2);
        let mut data = AdaptedData::tanaka_webster(5);
        data.phi = crate::linalg::Mat::identity(5, 5);
        let r = connection_suite(&model, &DataSource::Given(data), 1e-10).unwrap();
        assert!(!r.pass);
        assert!(!r.check("data_Phi").unwrap().pass);
    }
}
