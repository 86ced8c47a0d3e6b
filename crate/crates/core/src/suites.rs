//! Check suites behind the command-line commands.
//!
//! Every suite returns records in a fixed order so reports are reproducible
//! byte for byte. Formulas are compared against the normative paths: the
//! projection solver for the expansion and formal differentiation of the
//! derived loops for the covariant derivatives.

use crate::algebra::AlgVec;
use crate::closed::{ClosedForms, QuarticVariant};
use crate::error::Result;
use crate::loops::{Coefficient, LoopExpansion, Model};
use crate::multilinear::MultilinearMap;
use crate::report::{compare, format_vector, vanishes, CheckRecord, Report, Status};
use crate::scalar::Scalar;
use crate::series::{substitute, Series};
use crate::tensors::{
    alternate_first_pair, alternate_outer_pair, closed_a, closed_b, closed_d, closed_nabla1_a, closed_nabla2_a,
    coefficient_c, coefficient_d, cyclic_symmetrization, cyclic_symmetrization_first3, d_alternation_defect,
    full_symmetrization, hexagonal_condition, hexagonal_d_condition, tensor_from, CurvatureVariant, DReading,
    ExpansionMaps, WebTensorSet,
};

pub const VALIDATE: &str = "validate";
pub const EXPAND: &str = "expand";
pub const TENSORS: &str = "tensors";
pub const IDENTITIES: &str = "identities";
pub const HEXAGONAL: &str = "hexagonal";
pub const ORACLE_CHECK: &str = "oracle-check";

/// The commands in the order they are documented.
pub const COMMANDS: [&str; 6] = [VALIDATE, EXPAND, TENSORS, IDENTITIES, HEXAGONAL, ORACLE_CHECK];

/// Runs the suite for `command`; `None` for an unknown command.
pub fn run_command<T: Scalar>(command: &str, model: &Model<T>) -> Option<Report> {
    let run: fn(&Model<T>) -> Report = match command {
        VALIDATE => validate,
        EXPAND => expand,
        TENSORS => tensors,
        IDENTITIES => identities,
        HEXAGONAL => hexagonal,
        ORACLE_CHECK => oracle_check,
        _ => return None,
    };
    Some(run(model))
}

/// Algebra and split checks.
pub fn validate<T: Scalar>(model: &Model<T>) -> Report {
    let mut report = Report::default();
    for check in model.validate().checks {
        let record = match check.witness {
            None => CheckRecord::new(VALIDATE, check.name, Status::Pass),
            Some(w) => CheckRecord::new(VALIDATE, check.name, Status::Fail).at(&w),
        };
        report.push(record);
    }
    report
}

/// Everything the later suites need, computed once.
struct Computed<T> {
    oracle: LoopExpansion<T>,
    maps: ExpansionMaps<T>,
    set: WebTensorSet<T>,
}

fn compute<T: Scalar>(model: &Model<T>, with_tensors: bool) -> Result<(LoopExpansion<T>, Option<WebTensorSet<T>>)> {
    let oracle = model.solve_loop_oracle()?;
    let set = if with_tensors { Some(WebTensorSet::compute(model, &oracle)?) } else { None };
    Ok((oracle, set))
}

/// Validation failures short-circuit every other suite.
fn guarded<T: Scalar>(suite: &'static str, model: &Model<T>, body: impl FnOnce(&mut Report) -> Result<()>) -> Report {
    let mut report = validate(model);
    if !report.passed(false) {
        report.push(CheckRecord::new(suite, "model-valid", Status::Fail).detail("suite skipped"));
        return report;
    }
    report.records.clear();
    if let Err(e) = body(&mut report) {
        report.push(CheckRecord::new(suite, "computation", Status::Fail).detail(e.to_string()));
    }
    report
}

fn computed<T: Scalar>(model: &Model<T>) -> Result<Computed<T>> {
    let (oracle, set) = compute(model, true)?;
    let maps = ExpansionMaps::of(&oracle);
    Ok(Computed { oracle, maps, set: set.expect("requested") })
}

fn entries<T: Scalar>(suite: &'static str, name: &str, map: &MultilinearMap<T>, report: &mut Report) {
    for (idx, v) in map.entries() {
        report.push(CheckRecord::new(suite, name, Status::Info).at(&idx).actual(format_vector(&v)));
    }
}

fn series_record<T: Scalar>(suite: &'static str, check: &str, lhs: &Series<T>, rhs: &Series<T>) -> CheckRecord {
    if lhs == rhs {
        CheckRecord::new(suite, check, Status::Pass)
    } else {
        CheckRecord::new(suite, check, Status::Fail).detail("series differ")
    }
}

/// Status of a printed formula that disagrees with the normative path.
const PRINTED: Status = Status::Erratum;
/// Status of a relation that must hold.
const BINDING: Status = Status::Fail;

fn closed_form_records<T: Scalar>(suite: &'static str, model: &Model<T>, oracle: &LoopExpansion<T>, report: &mut Report) {
    let printed = ClosedForms::new(model, QuarticVariant::Printed);
    for c in Coefficient::ALL {
        let status = if c.degree() == 4 { PRINTED } else { BINDING };
        let name = if c.degree() == 4 { format!("closed-form-{}-printed", c.name()) } else { format!("closed-form-{}", c.name()) };
        report.push(compare(suite, name, &oracle.coefficient(c), &printed.coefficient(c), status));
    }
    for variant in [QuarticVariant::HalfLambda, QuarticVariant::Completed] {
        let forms = ClosedForms::new(model, variant);
        let status = if variant == QuarticVariant::Completed { BINDING } else { PRINTED };
        for c in [Coefficient::P, Coefficient::U] {
            let name = format!("closed-form-{}-{}", c.name(), variant.name());
            report.push(compare(suite, name, &oracle.coefficient(c), &forms.coefficient(c), status));
        }
    }
}

fn loop_law_records<T: Scalar>(suite: &'static str, oracle: &LoopExpansion<T>, report: &mut Report) -> Result<()> {
    let (space, dim) = (oracle.space(), oracle.z().dim());
    let (x, y) = (Series::x_bar(space, dim), Series::y_bar(space, dim));
    let zero = Series::zero(space, dim);
    report.push(series_record(suite, "unit-right", &oracle.compose_series(&x, &zero)?, &x));
    report.push(series_record(suite, "unit-left", &oracle.compose_series(&zero, &y)?, &y));
    let left = oracle.left_divide_series(&x, &y)?;
    report.push(series_record(suite, "left-division", &oracle.compose_series(&x, &left)?, &y));
    let right = oracle.right_divide_series(&x, &y)?;
    report.push(series_record(suite, "right-division", &oracle.compose_series(&right, &y)?, &x));
    Ok(())
}

/// Expansion coefficients from the solver and from the closed formulas, and
/// the loop laws of the solved product.
pub fn expand<T: Scalar>(model: &Model<T>) -> Report {
    guarded(EXPAND, model, |report| {
        let (oracle, _) = compute(model, false)?;
        let printed = ClosedForms::new(model, QuarticVariant::Printed);
        for c in Coefficient::ALL {
            let solved = oracle.coefficient(c);
            let closed = printed.coefficient(c);
            for idx in crate::multilinear::index_tuples(solved.slot_dims()) {
                let (s, f) = (solved.value(&idx), closed.value(&idx));
                if s.is_zero() && f.is_zero() {
                    continue;
                }
                report.push(
                    CheckRecord::new(EXPAND, c.name(), Status::Info).at(&idx).values(format_vector(&f), format_vector(&s)),
                );
            }
        }
        closed_form_records(EXPAND, model, &oracle, report);
        loop_law_records(EXPAND, &oracle, report)
    })
}

/// Structure tensors from the normative paths.
pub fn tensors<T: Scalar>(model: &Model<T>) -> Report {
    guarded(TENSORS, model, |report| {
        let c = computed(model)?;
        for (name, map) in c.set.named() {
            if name != "B" {
                entries(TENSORS, name, map, report);
            }
        }
        Ok(())
    })
}

fn path_records<T: Scalar>(suite: &'static str, model: &Model<T>, c: &Computed<T>, report: &mut Report) {
    let split = &model.split;
    let set = &c.set;
    report.push(compare(suite, "a-closed", &set.a, &closed_a(split), BINDING));
    report.push(compare(suite, "b-closed", &set.b, &closed_b(split, &model.jet, CurvatureVariant::Statement), BINDING));
    report.push(compare(suite, "nabla1-a-closed", &set.nabla1_a, &closed_nabla1_a(split, &model.jet), BINDING));
    report.push(compare(suite, "nabla2-a-closed", &set.nabla2_a, &closed_nabla2_a(split), BINDING));
    report.push(compare(suite, "c-coefficient-formula", &set.c, &coefficient_c(split, &c.maps), BINDING));
    report.push(compare(suite, "d-coefficient-formula", &set.d, &coefficient_d(split, &c.maps, DReading::Corrected), BINDING));
    report.push(compare(suite, "d-closed", &set.d, &closed_d(split, &model.jet), BINDING));
}

/// `Ψ_u(x) = ξ + ½[u,ξ] + ½Π[u,ξ] + 2R(u,ξ)` to first order in `u`, and
/// `Ψ_u(x ·_u y) = Ψ_u(x) ∗ Ψ_u(y)`, for `u = tζ` along each basis direction.
fn translation_records<T: Scalar>(suite: &'static str, model: &Model<T>, oracle: &LoopExpansion<T>, report: &mut Report) -> Result<()> {
    let split = &model.split;
    let alg = split.algebra();
    let space = oracle.space().with_param();
    let dim = model.dim();
    let (x, y) = (Series::x_bar(space, dim), Series::y_bar(space, dim));
    let mut first_order = Status::Pass;
    let mut isomorphism = Status::Pass;
    let mut witness = (None, None);
    for dir in 0..split.v_dim() {
        let u = Series::param_times(space, split.basis(dir));
        let psi_x = model.psi(oracle, &u, &x)?;
        let ux = alg.bracket_series(&u, &x)?;
        let expected = x
            .add(&ux.scale(&T::frac(1, 2)))
            .add(&split.proj_v_series(&ux).scale(&T::frac(1, 2)))
            .add(&substitute(model.jet.r(), &[&u, &x])?.scale(&T::int(2)));
        if psi_x.bidegree(1, 0, 1) != expected.bidegree(1, 0, 1) || psi_x.bidegree(1, 0, 0) != x {
            first_order = Status::Fail;
            witness.0.get_or_insert(dir);
        }
        let derived = oracle.derived_loop_u(&split.basis(dir))?;
        let lhs = model.psi(oracle, &u, &derived)?;
        let psi_y = model.psi(oracle, &u, &y)?;
        let rhs = model.translated_product(&u, &psi_x, &psi_y)?;
        if lhs != rhs {
            isomorphism = Status::Fail;
            witness.1.get_or_insert(dir);
        }
    }
    let with = |r: CheckRecord, w: Option<usize>| match w {
        Some(d) => r.at(&[d]),
        None => r,
    };
    report.push(with(CheckRecord::new(suite, "translation-first-order", first_order), witness.0));
    report.push(with(CheckRecord::new(suite, "derived-loop-isomorphism", isomorphism), witness.1));
    Ok(())
}

/// With `𝔥 = 0` the loop is the group law and the web is flat.
fn group_records<T: Scalar>(suite: &'static str, model: &Model<T>, c: &Computed<T>, report: &mut Report) -> Result<()> {
    let split = &model.split;
    if !split.h_is_trivial() {
        return Ok(());
    }
    let (space, dim) = (c.oracle.space(), model.dim());
    let bch = split.algebra().bch4(&Series::x_bar(space, dim), &Series::y_bar(space, dim))?;
    report.push(series_record(suite, "group-law", c.oracle.z(), &bch));
    let half_bracket = tensor_from(split, 2, |a| split.bracket(&a[0], &a[1]).scale(&T::frac(-1, 2)));
    report.push(compare(suite, "group-torsion", &half_bracket, &c.set.a, BINDING));
    for (name, map) in c.set.named() {
        if !matches!(name, "a" | "B") {
            report.push(vanishes(suite, format!("group-{name}-zero"), map, BINDING));
        }
    }
    Ok(())
}

/// Identities among the structure tensors and agreement of every binding path.
pub fn identities<T: Scalar>(model: &Model<T>) -> Report {
    guarded(IDENTITIES, model, |report| {
        let c = computed(model)?;
        let split = &model.split;
        let set = &c.set;
        report.push(compare(IDENTITIES, "nabla1-a-alternation", &alternate_outer_pair(&set.b), &closed_nabla1_a(split, &model.jet), BINDING));
        report.push(compare(IDENTITIES, "nabla2-a-alternation", &alternate_first_pair(&set.b), &closed_nabla2_a(split), BINDING));
        report.push(compare(IDENTITIES, "nabla1-a-derivative-alternation", &alternate_outer_pair(&set.b), &set.nabla1_a, BINDING));
        report.push(compare(IDENTITIES, "nabla2-a-derivative-alternation", &alternate_first_pair(&set.b), &set.nabla2_a, BINDING));
        report.push(vanishes(IDENTITIES, "d-alternation", &d_alternation_defect(split, &set.d, &set.a, &set.b), BINDING));
        report.push(vanishes(IDENTITIES, "a-antisymmetric", &set.a.combine(&T::one(), &set.a.permute_slots(&[1, 0]), &T::one()), BINDING));
        let r_part = tensor_from(split, 3, |a| split.pi_bracket(&model.jet.r().eval(&[&a[0], &a[1]]), &a[2]).scale(&T::int(-2)));
        let flat_b = set.b.combine(&T::one(), &r_part, &-T::one());
        report.push(vanishes(IDENTITIES, "b-bracket-part-antisymmetric", &flat_b.combine(&T::one(), &flat_b.permute_slots(&[1, 0, 2]), &T::one()), BINDING));
        path_records(IDENTITIES, model, &c, report);
        loop_law_records(IDENTITIES, &c.oracle, report)?;
        translation_records(IDENTITIES, model, &c.oracle, report)?;
        group_records(IDENTITIES, model, &c, report)
    })
}

/// Hexagonality of the web: the cyclic condition on `R` decides; the
/// symmetrized curvature and, on hexagonal inputs, the condition on `d` are
/// checked against it.
pub fn hexagonal<T: Scalar>(model: &Model<T>) -> Report {
    guarded(HEXAGONAL, model, |report| {
        let split = &model.split;
        let condition = hexagonal_condition(split, &model.jet);
        let failing: Vec<(Vec<usize>, AlgVec<T>)> = condition.entries().collect();
        let is_hexagonal = failing.is_empty();
        let mut verdict = CheckRecord::new(HEXAGONAL, "verdict", Status::Info)
            .actual(if is_hexagonal { "hexagonal" } else { "not hexagonal" });
        if let Some((idx, _)) = failing.first() {
            verdict = verdict.at(idx);
        }
        report.push(verdict);
        for (idx, v) in &failing {
            report.push(CheckRecord::new(HEXAGONAL, "cyclic-r-condition", Status::Info).at(idx).actual(format_vector(v)));
        }

        let c = computed(model)?;
        let cyclic = cyclic_symmetrization(&c.set.b);
        let full = full_symmetrization(&c.set.b);
        let agree = |name: &str, t: &MultilinearMap<T>, mismatch: Status| {
            let zero = t.is_zero();
            let rec = CheckRecord::new(HEXAGONAL, name, if zero == is_hexagonal { Status::Pass } else { mismatch });
            match t.entries().next() {
                Some((idx, v)) => rec.at(&idx).actual(format_vector(&v)),
                None => rec,
            }
        };
        // the cyclic part of b carries ½σΠ[Π[x,y],z] besides the R terms, which
        // only vanishes for n ≤ 2; the full symmetrization removes it
        report.push(agree("b-cyclic-symmetrization", &cyclic, PRINTED));
        report.push(agree("b-full-symmetrization", &full, BINDING));

        let d_cyclic = cyclic_symmetrization_first3(&c.set.d);
        let d_condition = hexagonal_d_condition(split, &model.jet);
        if is_hexagonal {
            let record = if d_cyclic.is_zero() {
                vanishes(HEXAGONAL, "d-condition", &d_condition, BINDING)
            } else if d_condition.is_zero() {
                CheckRecord::new(HEXAGONAL, "d-condition", Status::Fail).detail("condition holds but d is not cyclically symmetric")
            } else {
                let (idx, v) = d_cyclic.entries().next().expect("nonzero");
                CheckRecord::new(HEXAGONAL, "d-condition", Status::Info)
                    .at(&idx)
                    .actual(format_vector(&v))
                    .detail("R satisfies the cyclic condition but is not the jet of a hexagonal web")
            };
            report.push(record);
        } else {
            let rec = CheckRecord::new(HEXAGONAL, "d-condition", Status::Info)
                .actual(if d_condition.is_zero() { "holds" } else { "fails" })
                .detail("diagnostic only on non-hexagonal input");
            report.push(rec);
        }
        Ok(())
    })
}

/// Every closed formula against the normative paths, printed readings included.
pub fn oracle_check<T: Scalar>(model: &Model<T>) -> Report {
    guarded(ORACLE_CHECK, model, |report| {
        let c = computed(model)?;
        let split = &model.split;
        closed_form_records(ORACLE_CHECK, model, &c.oracle, report);
        path_records(ORACLE_CHECK, model, &c, report);
        let derivation = closed_b(split, &model.jet, CurvatureVariant::Derivation);
        report.push(compare(ORACLE_CHECK, "b-closed-derivation-line", &c.set.b, &derivation, PRINTED));
        for reading in [DReading::Printed, DReading::MirrorU] {
            let name = format!("d-coefficient-formula-{}", reading.name());
            report.push(compare(ORACLE_CHECK, name, &c.set.d, &coefficient_d(split, &c.maps, reading), PRINTED));
        }
        Ok(())
    })
}
