//! Output serialization.
//!
//! JSON documents carry `schema_version` and represent every complex number
//! as an `[re, im]` pair; CSV files start with a `# config=...` comment line
//! embedding the resolved configuration, followed by a fixed header. Both
//! formats are byte-stable for a fixed config and seed: no maps with
//! unstable iteration order, floats printed by the shortest-roundtrip
//! formatter.

use serde::{Deserialize, Serialize};
use zeeman_cavity::dynamics::QuantumState;
use zeeman_cavity::measurement::MeasurementOutcome;
use zeeman_cavity::protocols::ProtocolReport;

use crate::config::ResolvedConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Components with squared magnitude at or below this are dropped from
/// serialized states to keep large joint states readable; the threshold is
/// fixed, so output stays deterministic.
const SUPPORT_EPS: f64 = 1e-20;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentDto {
    pub label: String,
    pub amp: [f64; 2],
    pub prob: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateDto {
    pub basis: String,
    pub components: Vec<ComponentDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutcomeDto {
    pub photons: u32,
    pub probability: f64,
    pub conditional: StateDto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScheduleDto {
    pub event: String,
    pub gt: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedStateDto {
    pub name: String,
    pub state: StateDto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsDto {
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub protocol: String,
    pub params: ParamsDto,
    pub seed: Option<u64>,
    pub schedule: Vec<ScheduleDto>,
    pub outcomes: Vec<OutcomeDto>,
    pub final_states: Vec<NamedStateDto>,
    pub figures_of_merit: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvolveRowDto {
    pub gt: f64,
    pub components: Vec<ComponentDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyRowDto {
    pub gt: f64,
    pub max_abs_err_eq8: f64,
    pub max_abs_err_eq14: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifySummaryDto {
    pub tolerance: f64,
    pub max_abs_err_eq8: f64,
    pub max_abs_err_eq14: f64,
    pub pass: bool,
    pub rows: Vec<VerifyRowDto>,
}

/// Serialize a state, dropping numerically dead components.
pub fn state_dto(state: &QuantumState) -> StateDto {
    let components = state
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, amp)| amp.norm_sqr() > SUPPORT_EPS)
        .map(|(i, amp)| ComponentDto {
            label: state.component_label(i),
            amp: [amp.re, amp.im],
            prob: amp.norm_sqr(),
        })
        .collect();
    StateDto { basis: state.basis().label(), components }
}

/// Serialize a full state including zero components (used by `evolve`, where
/// a fixed row count per time point matters).
pub fn state_dto_dense(state: &QuantumState) -> Vec<ComponentDto> {
    state
        .amps()
        .iter()
        .enumerate()
        .map(|(i, amp)| ComponentDto {
            label: state.component_label(i),
            amp: [amp.re, amp.im],
            prob: amp.norm_sqr(),
        })
        .collect()
}

fn outcome_dto(outcome: &MeasurementOutcome) -> OutcomeDto {
    OutcomeDto {
        photons: outcome.photons,
        probability: outcome.probability,
        conditional: state_dto(&outcome.conditional),
    }
}

/// Convert a protocol report; schedule times are rescaled to dimensionless
/// `gt` with the configured base coupling.
pub fn report_dto(report: &ProtocolReport, g_base: f64) -> ReportDto {
    ReportDto {
        protocol: report.protocol.clone(),
        params: ParamsDto {
            g: report.params.g,
            alpha: report.params.alpha,
            beta: report.params.beta,
            omega: report.params.omega,
        },
        seed: report.seed,
        schedule: report
            .schedule
            .iter()
            .map(|entry| ScheduleDto { event: entry.event.clone(), gt: entry.time * g_base })
            .collect(),
        outcomes: report.outcomes.iter().map(outcome_dto).collect(),
        final_states: report
            .final_states
            .iter()
            .map(|(name, state)| NamedStateDto { name: name.clone(), state: state_dto(state) })
            .collect(),
        figures_of_merit: report.figures_of_merit.clone(),
    }
}

#[derive(Serialize)]
struct JsonDocument<'a, T: Serialize> {
    schema_version: u32,
    config: &'a ResolvedConfig,
    #[serde(flatten)]
    payload: T,
}

#[derive(Serialize)]
pub struct EvolvePayload {
    pub rows: Vec<EvolveRowDto>,
}

#[derive(Serialize)]
pub struct ReportPayload {
    pub report: ReportDto,
}

#[derive(Serialize)]
pub struct FeedbackPayload {
    pub cycles: Vec<ReportDto>,
}

#[derive(Serialize)]
pub struct VerifyPayload {
    pub verify: VerifySummaryDto,
}

pub fn to_json<T: Serialize>(config: &ResolvedConfig, payload: T) -> String {
    let doc = JsonDocument { schema_version: SCHEMA_VERSION, config, payload };
    let mut text = serde_json::to_string_pretty(&doc).expect("serialization cannot fail");
    text.push('\n');
    text
}

fn config_comment(config: &ResolvedConfig) -> String {
    format!("# config={}", serde_json::to_string(config).expect("serialization cannot fail"))
}

fn csv_quote(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

/// CSV for `evolve`: header `gt,basis_label,re,im,prob`, one row per
/// (time point, basis component).
pub fn evolve_csv(config: &ResolvedConfig, rows: &[EvolveRowDto]) -> String {
    let mut out = String::new();
    out.push_str(&config_comment(config));
    out.push_str("\ngt,basis_label,re,im,prob\n");
    for row in rows {
        for c in &row.components {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.gt,
                csv_quote(&c.label),
                c.amp[0],
                c.amp[1],
                c.prob
            ));
        }
    }
    out
}

/// CSV for `verify`: header `gt,max_abs_err_eq8,max_abs_err_eq14`.
pub fn verify_csv(config: &ResolvedConfig, summary: &VerifySummaryDto) -> String {
    let mut out = String::new();
    out.push_str(&config_comment(config));
    out.push_str("\ngt,max_abs_err_eq8,max_abs_err_eq14\n");
    for row in &summary.rows {
        out.push_str(&format!("{},{},{}\n", row.gt, row.max_abs_err_eq8, row.max_abs_err_eq14));
    }
    out
}

/// CSV for single-report protocols: `figure,value` rows.
pub fn report_csv(config: &ResolvedConfig, report: &ReportDto) -> String {
    let mut out = String::new();
    out.push_str(&config_comment(config));
    out.push_str("\nfigure,value\n");
    for (name, value) in &report.figures_of_merit {
        out.push_str(&format!("{},{}\n", csv_quote(name), value));
    }
    out
}

/// CSV for the calibration loop: one wide row per cycle.
pub fn feedback_csv(config: &ResolvedConfig, cycles: &[ReportDto]) -> String {
    let mut out = String::new();
    out.push_str(&config_comment(config));
    let header: Vec<String> = cycles
        .first()
        .map(|c| c.figures_of_merit.iter().map(|(name, _)| name.clone()).collect())
        .unwrap_or_default();
    out.push('\n');
    out.push_str(&header.join(","));
    out.push('\n');
    for cycle in cycles {
        let row: Vec<String> =
            cycle.figures_of_merit.iter().map(|(_, value)| value.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
