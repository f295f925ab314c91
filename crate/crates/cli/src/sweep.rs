use std::time::Instant;

use qdel_core::circuits::{
    check_equivalence, decoder_full_circuit, decoder_step1_circuit, encoder_circuit,
    encoder_reference,
};
use qdel_core::gencode::{encode_general, weight_classes, GeneralDecoder};
use qdel_core::q4code::{deletion_components, deletion_mixture, encode4, Decoder4};
use qdel_core::qstate::{
    self, fidelity, isometry_deviation, max_modulus, random, reduced_state, DensityMatrix,
    PureState, QubitIndex, Tensor,
};
use qdel_core::trial_rng;

use crate::report::{CheckResult, PositionResult, Report};
use crate::{step3_name, CliError, Command, SweepConfig};

/// Running maximum per deletion position.
struct Positions {
    worst: Vec<f64>,
    errors: Vec<Option<String>>,
}

impl Positions {
    fn new(n: usize) -> Self {
        Self {
            worst: vec![0.0; n],
            errors: vec![None; n],
        }
    }

    fn record(&mut self, position: usize, value: qdel_core::Result<f64>) {
        let k = position - 1;
        match value {
            Ok(v) => self.worst[k] = self.worst[k].max(v),
            Err(e) => {
                self.worst[k] = f64::INFINITY;
                self.errors[k].get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self, tol: f64) -> Vec<PositionResult> {
        self.worst
            .into_iter()
            .zip(self.errors)
            .enumerate()
            .map(|(k, (worst, error))| PositionResult {
                position: k + 1,
                max_infidelity: worst,
                pass: error.is_none() && worst <= tol,
                error,
            })
            .collect()
    }
}

/// Runs the sweep described by `config`. Trial `t` draws from
/// `trial_rng(seed, t)`, so results do not depend on evaluation order.
pub fn run_sweep(config: &SweepConfig) -> Result<Report, CliError> {
    config.validate()?;
    let start = Instant::now();
    let mut report = match config.command {
        Command::VerifyQ4 => verify_q4(config),
        Command::VerifyGeneral => verify_general(config)?,
        Command::Lemma1 => deletion_mixture_check(config),
        Command::CircuitCheck => circuit_check(config),
    };
    if config.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    report.pass = report.first_failure().is_none();
    Ok(report)
}

fn base_report(config: &SweepConfig, metric: &str) -> Report {
    Report {
        command: config.command.name().to_string(),
        seed: config.seed,
        trials: config.trials,
        tol: config.tol,
        level: None,
        step3: None,
        metric: metric.to_string(),
        positions: Vec::new(),
        max_branch_probability_deviation: None,
        checks: Vec::new(),
        wall_time_seconds: None,
        pass: false,
    }
}

fn infidelity(phi: &PureState, psi: &PureState) -> qdel_core::Result<f64> {
    Ok(1.0 - phi.inner(psi)?.norm_sqr())
}

fn verify_q4(config: &SweepConfig) -> Report {
    let decoder = Decoder4::new(config.step3);
    let mut positions = Positions::new(4);
    let mut branch: f64 = 0.0;
    for t in 0..config.trials as u64 {
        let mut rng = trial_rng(config.seed, t);
        let phi = random::haar_qubit(&mut rng);
        let code = match encode4(&phi) {
            Ok(c) => c,
            Err(e) => {
                (1..=4).for_each(|i| positions.record(i, Err(e.clone())));
                continue;
            }
        };
        for i in 1..=4 {
            let received = code.state().delete_qubit(QubitIndex::new(i));
            for outcome in 0..2 {
                let result = received.clone().and_then(|rho| {
                    let d = decoder.decode_forced(&rho, outcome)?;
                    branch = branch.max((d.probability - 0.5).abs());
                    infidelity(&phi, &d.state)
                });
                positions.record(i, result);
            }
        }
    }
    let mut report = base_report(config, "infidelity");
    report.step3 = Some(step3_name(config.step3).to_string());
    report.positions = positions.finish(config.tol);
    report.max_branch_probability_deviation = Some(branch);
    report
}

fn verify_general(config: &SweepConfig) -> Result<Report, CliError> {
    let params = weight_classes(config.l).map_err(|e| CliError::InvalidConfig(e.to_string()))?;
    let n = params.length();
    let mut report = base_report(config, "infidelity");
    report.level = Some(config.l);
    let mut positions = Positions::new(n);
    let decoder = match GeneralDecoder::new(params.clone()) {
        Ok(d) => d,
        Err(e) => {
            (1..=n).for_each(|i| positions.record(i, Err(e.clone())));
            report.positions = positions.finish(config.tol);
            return Ok(report);
        }
    };
    let mut branch: f64 = 0.0;
    let mut received = DensityMatrix::maximally_mixed(1);
    for t in 0..config.trials as u64 {
        let mut rng = trial_rng(config.seed, t);
        let message = random::haar_state(config.l, &mut rng);
        let code = match encode_general(&message, &params) {
            Ok(c) => c,
            Err(e) => {
                (1..=n).for_each(|i| positions.record(i, Err(e.clone())));
                continue;
            }
        };
        for i in 1..=n {
            if let Err(e) = code.delete_qubit_into(QubitIndex::new(i), &mut received) {
                positions.record(i, Err(e));
                continue;
            }
            for outcome in 0..2 {
                let result = decoder.decode_forced(&received, outcome).and_then(|d| {
                    branch = branch.max((d.probability - 0.5).abs());
                    infidelity(&message, &d.state)
                });
                positions.record(i, result);
            }
        }
    }
    report.positions = positions.finish(config.tol);
    report.max_branch_probability_deviation = Some(branch);
    Ok(report)
}

fn deletion_mixture_check(config: &SweepConfig) -> Report {
    let mut positions = Positions::new(4);
    for t in 0..config.trials as u64 {
        let mut rng = trial_rng(config.seed, t);
        let phi = random::haar_qubit(&mut rng);
        for i in 1..=4 {
            let deviation = encode4(&phi).and_then(|code| {
                let deleted = code.state().delete_qubit(QubitIndex::new(i))?;
                deleted.max_abs_diff(&deletion_mixture(&phi)?)
            });
            positions.record(i, deviation);
        }
    }
    let mut report = base_report(config, "elementwise deviation from closed-form mixture");
    report.positions = positions.finish(config.tol);
    report
}

/// The eight rows of the CNOT-stage table, inputs with `x4 = 0`.
const CNOT_TABLE: [(&str, &str); 8] = [
    ("0000", "0000"),
    ("0010", "1111"),
    ("1000", "1001"),
    ("1010", "0110"),
    ("0100", "0101"),
    ("0110", "1010"),
    ("1100", "1100"),
    ("1110", "0011"),
];

fn check(name: &str, tol: f64, value: qdel_core::Result<f64>) -> CheckResult {
    match value {
        Ok(deviation) => CheckResult {
            name: name.to_string(),
            deviation,
            pass: deviation <= tol,
            error: None,
        },
        Err(e) => CheckResult {
            name: name.to_string(),
            deviation: f64::INFINITY,
            pass: false,
            error: Some(e.to_string()),
        },
    }
}

fn circuit_check(config: &SweepConfig) -> Report {
    let tol = config.tol;
    let encoder = encoder_circuit();
    let messages: Vec<PureState> = (0..config.trials as u64)
        .map(|t| random::haar_qubit(&mut trial_rng(config.seed, t)))
        .collect();
    let mut checks = Vec::new();

    let inputs: Vec<PureState> = messages
        .iter()
        .map(|phi| phi.tensor(&PureState::ket("000")))
        .collect();
    checks.push(check(
        "encoder",
        tol,
        check_equivalence(&encoder, encoder_reference, &inputs),
    ));

    let tail = encoder.suffix(3);
    let table = CNOT_TABLE.iter().try_fold(0.0f64, |worst, (from, to)| {
        let out = tail.simulate(&PureState::ket(from))?;
        Ok(worst.max(out.distance(&PureState::ket(to))?))
    });
    checks.push(check("cnot table", tol, table));

    let step1 = decoder_step1_circuit();
    let pins = messages
        .iter()
        .try_fold(isometry_deviation(&step1), |worst, phi| {
            let (even, _) = deletion_components(phi)?;
            let out = PureState::normalized(&step1 * even.amplitudes())?;
            let want = phi.tensor(&PureState::ket("00"));
            Ok(worst.max(1.0 - out.inner(&want)?.norm_sqr()))
        });
    checks.push(check("decoder step 1", tol, pins));

    let full = decoder_full_circuit();
    let mut positions = Positions::new(4);
    let mut ancilla: qdel_core::Result<f64> = Ok(0.0);
    let half = DensityMatrix::maximally_mixed(2);
    for phi in &messages {
        for i in 1..=4 {
            let out = encode4(phi)
                .and_then(|code| code.state().delete_qubit(QubitIndex::new(i)))
                .and_then(|received| full.apply(&received));
            let first = out
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|o| reduced_state(o, &[QubitIndex::new(1)]))
                .and_then(|q| fidelity(phi, &q))
                .map(|f| 1.0 - f);
            positions.record(i, first);
            if let (Ok(worst), Ok(o)) = (&ancilla, &out) {
                ancilla = reduced_state(o, &[QubitIndex::new(4)])
                    .map(|a| worst.max(max_modulus(&(a.matrix() - half.matrix()))));
            }
        }
    }
    checks.push(check("decoder ancilla", tol, ancilla));
    checks.push(check(
        "decoder unitary",
        tol,
        Ok(qstate::isometry_deviation(&full.unitary())),
    ));

    let mut report = base_report(config, "decoded qubit infidelity");
    report.positions = positions.finish(tol);
    report.checks = checks;
    report
}
