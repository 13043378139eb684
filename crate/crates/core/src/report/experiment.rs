use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::overhead::{OverheadResult, TimeOverheadResult};
use crate::attackeval::{run_attack, AttackParams, Metrics};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::segcore::{profiles, SegmentationConfig};
use crate::shaper::{wall_time_summary, TransferStats};
use crate::tracesim::{
    ingest_trace_with_header, match_cover_traffic, obfuscate_trace, pad_trace, presets,
    synthesize_trace, write_trace, DeviceProfile, Trace, TraceFormat, DEFAULT_MTU_FRAME,
    DEFAULT_TIME_OVERHEAD, FRAME_HEADER_BYTES,
};

/// Where a device's undefended traffic comes from. Exactly one source is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSpec {
    pub name: String,
    /// Name of a bundled synthetic device (`bulb`, `plug`, `camera`, `doorbell`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<DeviceProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    /// Segmentation preset name or JSON file.
    #[serde(default = "default_segmentation")]
    pub segmentation: String,
}

fn default_segmentation() -> String {
    "low-bandwidth".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverSpec {
    pub enabled: bool,
    /// Device pairs whose data rates are evened out against each other.
    pub pairs: Vec<[String; 2]>,
}

impl Default for CoverSpec {
    fn default() -> Self {
        CoverSpec {
            enabled: true,
            pairs: Vec::new(),
        }
    }
}

/// Saved `shaper send` outputs to turn into latency overheads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkInputs {
    pub undefended: PathBuf,
    pub defended: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Length of synthesized traces, seconds.
    pub duration_s: f64,
    pub devices: Vec<DeviceSpec>,
    /// Classification groups; empty means one group of all devices.
    pub groups: Vec<Vec<String>>,
    pub cover: CoverSpec,
    pub attack: AttackParams,
    pub time_overhead: f64,
    pub header_bytes: u32,
    pub mtu_frame: u32,
    /// Replaces every device's segmentation probability when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prob_override: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkInputs>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            duration_s: 3600.0,
            devices: Vec::new(),
            groups: Vec::new(),
            cover: CoverSpec::default(),
            attack: AttackParams::default(),
            time_overhead: DEFAULT_TIME_OVERHEAD,
            header_bytes: FRAME_HEADER_BYTES,
            mtu_frame: DEFAULT_MTU_FRAME,
            prob_override: None,
            benchmark: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.devices.is_empty() {
            return Err(Error::config("experiment lists no devices"));
        }
        let mut names = std::collections::BTreeSet::new();
        for d in &self.devices {
            if !names.insert(d.name.as_str()) {
                return Err(Error::config(format!("device `{}` listed twice", d.name)));
            }
            let sources = [
                d.preset.is_some(),
                d.profile.is_some(),
                d.profile_path.is_some(),
                d.trace.is_some(),
            ];
            if sources.iter().filter(|&&s| s).count() != 1 {
                return Err(Error::config(format!(
                    "device `{}` needs exactly one of preset, profile, profile_path, trace",
                    d.name
                )));
            }
        }
        let known = |n: &String| names.contains(n.as_str());
        for g in &self.groups {
            if g.len() < 2 || !g.iter().all(known) {
                return Err(Error::config(format!("bad classification group {g:?}")));
            }
        }
        for p in &self.cover.pairs {
            if !p.iter().all(known) || p[0] == p[1] {
                return Err(Error::config(format!("bad cover pair {p:?}")));
            }
        }
        Ok(())
    }

    fn groups(&self) -> Vec<Vec<String>> {
        if self.groups.is_empty() {
            vec![self.devices.iter().map(|d| d.name.clone()).collect()]
        } else {
            self.groups.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub devices: Vec<String>,
    pub undefended: Metrics,
    pub padded: Metrics,
    pub segmented: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub device: String,
    pub cover_bytes: u64,
    pub cover_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub segmentation: BTreeMap<String, SegmentationConfig>,
    pub seeds: BTreeMap<String, u64>,
    pub groups: Vec<GroupReport>,
    pub padding_overhead: Vec<OverheadResult>,
    pub segmentation_overhead: Vec<OverheadResult>,
    pub cover: Vec<CoverReport>,
    pub time_overhead: Vec<TimeOverheadResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Serialize)]
struct MetricsRow<'a> {
    group: String,
    scenario: &'a str,
    accuracy: f64,
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Serialize)]
struct OverheadRow<'a> {
    defense: &'a str,
    device: &'a str,
    w_b: u64,
    d_b: u64,
    cover_bytes: u64,
    b: f64,
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage {
        stage: name.to_string(),
        source: Box::new(e),
    })
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Loads the config at `path` and runs it, writing artifacts to `out_dir`.
pub fn run_experiment(path: impl AsRef<Path>, out_dir: impl AsRef<Path>) -> Result<Report> {
    let path = path.as_ref();
    let cfg = stage("config", ExperimentConfig::load(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    run_experiment_config(&cfg, base, out_dir.as_ref())
}

/// Runs the none / padding / segmentation comparison over identical inputs.
///
/// Relative paths in `cfg` resolve against `base`. Intermediate traces land
/// under `out_dir/traces/<scenario>/` as they are produced, so a failed run
/// leaves everything up to the failing stage on disk.
pub fn run_experiment_config(cfg: &ExperimentConfig, base: &Path, out_dir: &Path) -> Result<Report> {
    cfg.validate()?;
    for scenario in ["original", "padded", "segmented"] {
        fs::create_dir_all(out_dir.join("traces").join(scenario))?;
    }
    let mut seeds = BTreeMap::new();
    let mut seed_for = |label: String| {
        let s = derive_seed(cfg.seed, &label);
        seeds.insert(label, s);
        s
    };

    let mut segmentation = BTreeMap::new();
    let mut original = BTreeMap::new();
    for d in &cfg.devices {
        let seg = stage(&format!("segmentation profile for {}", d.name), resolve_segmentation(d, base, cfg))?;
        segmentation.insert(d.name.clone(), seg);
        let seed = seed_for(format!("synth/{}", d.name));
        let trace = stage(&format!("load {}", d.name), load_device(d, base, cfg, seed))?;
        write_trace(&trace, out_dir.join(format!("traces/original/{}.jsonl", d.name)), TraceFormat::Jsonl)?;
        original.insert(d.name.clone(), trace);
    }

    let mut padded = BTreeMap::new();
    for (name, trace) in &original {
        let mut rng = seeded(seed_for(format!("pad/{name}")));
        let t = stage(&format!("pad {name}"), pad_trace(trace, cfg.mtu_frame, &mut rng))?;
        write_trace(&t, out_dir.join(format!("traces/padded/{name}.jsonl")), TraceFormat::Jsonl)?;
        padded.insert(name.clone(), t);
    }

    let mut segmented = BTreeMap::new();
    for (name, trace) in &original {
        let mut rng = seeded(seed_for(format!("segment/{name}")));
        let t = stage(
            &format!("segment {name}"),
            obfuscate_trace(trace, &segmentation[name], cfg.time_overhead, &mut rng),
        )?;
        segmented.insert(name.clone(), t);
    }
    if cfg.cover.enabled {
        for [a, b] in &cfg.cover.pairs {
            let mut rng = seeded(seed_for(format!("cover/{a}/{b}")));
            let (ta, tb) = stage(
                &format!("cover {a}/{b}"),
                match_cover_traffic(&segmented[a], &segmented[b], cfg.attack.window_s, &mut rng),
            )?;
            segmented.insert(a.clone(), ta);
            segmented.insert(b.clone(), tb);
        }
    }
    for (name, t) in &segmented {
        write_trace(t, out_dir.join(format!("traces/segmented/{name}.jsonl")), TraceFormat::Jsonl)?;
    }

    let mut groups = Vec::new();
    for group in cfg.groups() {
        let key = group.join("+");
        let split_seed = seed_for(format!("split/{key}"));
        let mut attack = cfg.attack.clone();
        attack.forest.seed = seed_for(format!("forest/{key}"));
        let pick = |set: &BTreeMap<String, Trace>| -> Vec<Trace> {
            group.iter().map(|n| set[n].clone()).collect()
        };
        let run = |label: &str, traces: Vec<Trace>| {
            stage(
                &format!("attack {label} on {key}"),
                run_attack(&traces, &attack, &mut seeded(split_seed)),
            )
        };
        groups.push(GroupReport {
            devices: group.clone(),
            undefended: run("undefended", pick(&original))?,
            padded: run("padded", pick(&padded))?,
            segmented: run("segmented", pick(&segmented))?,
        });
    }

    let mut padding_overhead = Vec::new();
    let mut segmentation_overhead = Vec::new();
    let mut cover = Vec::new();
    for (name, trace) in &original {
        let w = trace.total_bytes();
        padding_overhead.push(stage("overhead", OverheadResult::new(name, w, padded[name].total_bytes(), 0))?);
        let s = &segmented[name];
        segmentation_overhead.push(stage(
            "overhead",
            OverheadResult::new(name, w, s.real_bytes(), s.cover_bytes()),
        )?);
        cover.push(CoverReport {
            device: name.clone(),
            cover_bytes: s.cover_bytes(),
            cover_fraction: s.cover_fraction(),
        });
    }
    padding_overhead.push(stage("overhead", OverheadResult::total(&padding_overhead))?);
    segmentation_overhead.push(stage("overhead", OverheadResult::total(&segmentation_overhead))?);

    let time_overhead = match &cfg.benchmark {
        Some(b) => stage("benchmark", time_overheads(b, base))?,
        None => Vec::new(),
    };

    let report = Report {
        config: cfg.clone(),
        segmentation,
        seeds,
        groups,
        padding_overhead,
        segmentation_overhead,
        cover,
        time_overhead,
    };
    write_outputs(&report, out_dir)?;
    Ok(report)
}

fn resolve_segmentation(d: &DeviceSpec, base: &Path, cfg: &ExperimentConfig) -> Result<SegmentationConfig> {
    let seg = match profiles::by_name(&d.segmentation) {
        Some(c) => c,
        None => SegmentationConfig::load(resolve(base, Path::new(&d.segmentation)))?,
    };
    match cfg.prob_override {
        Some(p) => seg.with_prob(p),
        None => Ok(seg),
    }
}

fn load_device(d: &DeviceSpec, base: &Path, cfg: &ExperimentConfig, seed: u64) -> Result<Trace> {
    if let Some(path) = &d.trace {
        let path = resolve(base, path);
        let mut t = ingest_trace_with_header(&path, TraceFormat::from_path(&path), cfg.header_bytes)?;
        if t.device != d.name {
            return Err(Error::config(format!(
                "trace {} is labelled `{}`, expected `{}`",
                path.display(),
                t.device,
                d.name
            )));
        }
        t.header_bytes = cfg.header_bytes;
        return Ok(t);
    }
    let mut profile = match (&d.preset, &d.profile, &d.profile_path) {
        (Some(name), _, _) => presets::by_name(name)
            .ok_or_else(|| Error::config(format!("unknown device preset `{name}`")))?,
        (_, Some(p), _) => p.clone(),
        (_, _, Some(path)) => DeviceProfile::load(resolve(base, path))?,
        _ => unreachable!("validated: one source is set"),
    };
    profile.name = d.name.clone();
    profile.header_bytes = cfg.header_bytes;
    synthesize_trace(&profile, cfg.duration_s, &mut seeded(seed))
}

fn time_overheads(b: &BenchmarkInputs, base: &Path) -> Result<Vec<TimeOverheadResult>> {
    let load = |p: &Path| -> Result<Vec<TransferStats>> {
        Ok(serde_json::from_str(&fs::read_to_string(resolve(base, p))?)?)
    };
    let mean_packets = |runs: &[TransferStats]| {
        runs.iter().map(|r| r.packets_sent as f64).sum::<f64>() / runs.len().max(1) as f64
    };
    let undefended = load(&b.undefended)?;
    let (w_t, _) = wall_time_summary(&undefended);
    b.defended
        .iter()
        .map(|(label, path)| {
            let runs = load(path)?;
            let (d_t, _) = wall_time_summary(&runs);
            TimeOverheadResult::new(label, w_t, d_t, mean_packets(&undefended), mean_packets(&runs))
        })
        .collect()
}

fn write_outputs(report: &Report, out_dir: &Path) -> Result<()> {
    fs::write(out_dir.join("report.json"), report.to_json())?;

    let csv_err = |e: csv::Error| Error::invalid(e.to_string());
    let mut w = csv::Writer::from_path(out_dir.join("metrics.csv")).map_err(csv_err)?;
    for g in &report.groups {
        for (scenario, m) in [
            ("undefended", &g.undefended),
            ("padded", &g.padded),
            ("segmented", &g.segmented),
        ] {
            w.serialize(MetricsRow {
                group: g.devices.join("+"),
                scenario,
                accuracy: m.accuracy,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(out_dir.join("overhead.csv")).map_err(csv_err)?;
    for (defense, rows) in [
        ("padding", &report.padding_overhead),
        ("segmentation", &report.segmentation_overhead),
    ] {
        for r in rows {
            w.serialize(OverheadRow {
                defense,
                device: &r.device,
                w_b: r.w_b,
                d_b: r.d_b,
                cover_bytes: r.cover_bytes,
                b: r.b,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
