use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    Artifact, EnsembleSpec, InitialState, MatterWaveSetup, OpticsSetup, PlaneRange, ScenarioConfig, ScenarioKind,
    Setup, TimeSpec,
};
use crate::error::ScenarioError;
use crate::fields::PhysicalConstants;
use crate::grid::GridSpec;
use crate::optics::SlitSpec;
use crate::propagators::{Model, PotentialSpec};
use crate::trajectory::SamplingScheme;

const COMMON_KEYS: &[&str] = &[
    "scenario.name",
    "scenario.kind",
    "scenario.description",
    "scenario.assumptions",
    "grid.x_min",
    "grid.x_max",
    "grid.n_points",
    "outputs.artifacts",
    "checks.required",
];

const MATTER_WAVE_KEYS: &[&str] = &[
    "model.type",
    "model.gamma",
    "physics.hbar",
    "physics.mass",
    "potential.type",
    "potential.omega",
    "potential.center",
    "potential.c0",
    "potential.c1",
    "potential.c2",
    "time.t0",
    "time.dt",
    "time.t_final",
    "time.snapshot_every",
    "initial.type",
    "initial.center",
    "initial.centers",
    "initial.sigma",
    "initial.momentum",
    "initial.phase",
    "ensemble.n_trajectories",
    "ensemble.sampling",
    "ensemble.seed",
    "ensemble.dt",
];

const OPTICS_KEYS: &[&str] = &["optics.wavelength", "planes.ranges", "planes.report", "paths.per_slit", "paths.ds"];
const SLIT_KEYS: &[&str] = &["sigma", "center", "window"];

fn is_slit_section(section: &str) -> bool {
    section.strip_prefix("slit").is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

fn known_for(kind: ScenarioKind, key: &str) -> bool {
    if COMMON_KEYS.contains(&key) {
        return true;
    }
    match kind {
        ScenarioKind::MatterWave => MATTER_WAVE_KEYS.contains(&key),
        ScenarioKind::Optics => {
            OPTICS_KEYS.contains(&key)
                || key.split_once('.').is_some_and(|(s, k)| is_slit_section(s) && SLIT_KEYS.contains(&k))
        }
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    used: std::collections::BTreeSet<String>,
    kind: ScenarioKind,
}

fn invalid(line: Option<usize>, key: &str, constraint: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { line, key: key.to_string(), constraint: constraint.into() }
}

impl Entries {
    fn line(&self, key: &str) -> Option<usize> {
        self.map.get(key).map(|(l, _)| *l)
    }

    fn raw(&mut self, key: &str) -> Option<(usize, String)> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn required_raw(&mut self, key: &str) -> Result<(usize, String), ScenarioError> {
        self.raw(key).ok_or_else(|| invalid(None, key, "missing required key"))
    }

    fn string(&mut self, key: &str) -> Result<String, ScenarioError> {
        Ok(self.required_raw(key)?.1)
    }

    fn number_at(&self, line: usize, key: &str, text: &str) -> Result<f64, ScenarioError> {
        let v = match self.kind {
            ScenarioKind::MatterWave => {
                text.parse::<f64>().map_err(|_| invalid(Some(line), key, format!("expected a number, got '{text}'")))?
            }
            ScenarioKind::Optics => parse_length(text).map_err(|c| invalid(Some(line), key, c))?,
        };
        if !v.is_finite() {
            return Err(invalid(Some(line), key, "must be finite"));
        }
        Ok(v)
    }

    fn number(&mut self, key: &str) -> Result<f64, ScenarioError> {
        let (line, text) = self.required_raw(key)?;
        self.number_at(line, key, &text)
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        match self.raw(key) {
            Some((line, text)) => self.number_at(line, key, &text),
            None => Ok(default),
        }
    }

    fn count_or(&mut self, key: &str, default: Option<usize>) -> Result<usize, ScenarioError> {
        match (self.raw(key), default) {
            (Some((line, text)), _) => text
                .parse::<usize>()
                .map_err(|_| invalid(Some(line), key, format!("expected a non-negative integer, got '{text}'"))),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(invalid(None, key, "missing required key")),
        }
    }

    fn numbers(&mut self, key: &str) -> Result<Vec<f64>, ScenarioError> {
        let (line, text) = self.required_raw(key)?;
        list(&text).iter().map(|t| self.number_at(line, key, t)).collect()
    }

    /// Fails with the first key, in file order, that is not a key of this kind.
    fn reject_foreign(&self) -> Result<(), ScenarioError> {
        self.first_error(|k| !known_for(self.kind, k))
    }

    /// Fails with the first key that was not consumed.
    fn finish(self) -> Result<(), ScenarioError> {
        self.first_error(|k| !self.used.contains(k))
    }

    fn first_error(&self, bad: impl Fn(&str) -> bool) -> Result<(), ScenarioError> {
        let mut left: Vec<_> = self.map.iter().filter(|(k, _)| bad(k)).collect();
        left.sort_by_key(|(_, (l, _))| *l);
        if let Some((k, (line, _))) = left.first() {
            let other = match self.kind {
                ScenarioKind::MatterWave => ScenarioKind::Optics,
                ScenarioKind::Optics => ScenarioKind::MatterWave,
            };
            let reason = if known_for(self.kind, k) {
                "not used by this configuration".to_string()
            } else if known_for(other, k) {
                format!("not valid for {} scenarios", self.kind.name())
            } else {
                "unknown key".to_string()
            };
            return Err(invalid(Some(*line), k, reason));
        }
        Ok(())
    }
}

fn list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// A length with optional unit suffix, in metres. The decimal exponent is
/// shifted textually so `0.3 mm` parses to the same double as `0.0003`.
fn parse_length(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (num, shift) = [("nm", -9), ("um", -6), ("mm", -3), ("m", 0)]
        .iter()
        .find_map(|(u, s)| t.strip_suffix(u).map(|n| (n.trim_end(), *s)))
        .unwrap_or((t, 0));
    let bad = || format!("expected a length such as '0.3 mm', got '{text}'");
    if num.is_empty() {
        return Err(bad());
    }
    let (mantissa, exp) = match num.find(['e', 'E']) {
        Some(i) => (&num[..i], num[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (num, 0),
    };
    format!("{mantissa}e{}", exp + shift).parse::<f64>().map_err(|_| bad())
}

fn split_lines(source: &str) -> Result<BTreeMap<String, (usize, String)>, ScenarioError> {
    let mut map: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (key, value) = t
            .split_once('=')
            .ok_or_else(|| ScenarioError::Parse { line, reason: "expected 'section.key = value'".into() })?;
        let (key, value) = (key.trim(), value.trim());
        let well_formed = key.split_once('.').is_some_and(|(s, k)| {
            let ok = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_');
            ok(s) && ok(k)
        });
        if !well_formed {
            return Err(ScenarioError::Parse { line, reason: format!("malformed key '{key}'") });
        }
        if value.is_empty() {
            return Err(ScenarioError::Parse { line, reason: format!("empty value for '{key}'") });
        }
        if let Some((first, _)) = map.get(key) {
            return Err(ScenarioError::Parse { line, reason: format!("duplicate key '{key}' (first set on line {first})") });
        }
        map.insert(key.to_string(), (line, value.to_string()));
    }
    if map.is_empty() {
        return Err(ScenarioError::Parse { line: 1, reason: "empty scenario".into() });
    }
    Ok(map)
}

/// Parse and validate a scenario file.
pub fn parse_scenario(source: &str) -> Result<ScenarioConfig, ScenarioError> {
    let map = split_lines(source)?;
    let (kind_line, kind_text) =
        map.get("scenario.kind").cloned().ok_or_else(|| invalid(None, "scenario.kind", "missing required key"))?;
    let kind = ScenarioKind::parse(&kind_text)
        .ok_or_else(|| invalid(Some(kind_line), "scenario.kind", "must be 'matter_wave' or 'optics'"))?;
    let mut e = Entries { map, used: Default::default(), kind };
    e.used.insert("scenario.kind".into());
    e.reject_foreign()?;

    let name = e.string("scenario.name")?;
    if !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_' || b == b'.') {
        return Err(invalid(e.line("scenario.name"), "scenario.name", "only letters, digits, '-', '_' and '.' allowed"));
    }
    let description = e.raw("scenario.description").map(|r| r.1).unwrap_or_default();
    let assumptions = e
        .raw("scenario.assumptions")
        .map(|r| r.1.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();

    let grid_line = e.line("grid.n_points");
    let grid = GridSpec::new(e.number("grid.x_min")?, e.number("grid.x_max")?, e.count_or("grid.n_points", None)?)
        .map_err(|err| invalid(grid_line, "grid.n_points", err.to_string()))?;

    let setup = match kind {
        ScenarioKind::MatterWave => Setup::MatterWave(matter_wave(&mut e, grid)?),
        ScenarioKind::Optics => Setup::Optics(optics(&mut e, grid)?),
    };

    let outputs = match e.raw("outputs.artifacts") {
        Some((line, text)) => {
            let mut out = Vec::new();
            for a in list(&text) {
                let art = Artifact::parse(&a)
                    .ok_or_else(|| invalid(Some(line), "outputs.artifacts", format!("unknown artifact '{a}'")))?;
                if art.kind() != kind {
                    return Err(invalid(Some(line), "outputs.artifacts", format!("'{a}' is not produced by {} runs", kind.name())));
                }
                if !out.contains(&art) {
                    out.push(art);
                }
            }
            out
        }
        None => Vec::new(),
    };
    let required_checks = match e.raw("checks.required") {
        Some((line, text)) => {
            let checks = list(&text);
            for c in &checks {
                if !kind.checks().contains(&c.as_str()) {
                    return Err(invalid(Some(line), "checks.required", format!("unknown check '{c}' for {} runs", kind.name())));
                }
            }
            checks
        }
        None => Vec::new(),
    };
    e.finish()?;
    Ok(ScenarioConfig { name, description, assumptions, setup, outputs, required_checks })
}

fn matter_wave(e: &mut Entries, grid: GridSpec) -> Result<MatterWaveSetup, ScenarioError> {
    let model_line = e.line("model.type");
    let model_text = e.string("model.type")?;
    let model = Model::parse(&model_text)
        .ok_or_else(|| invalid(model_line, "model.type", "must be standard, caldirola_kanai or kostin"))?;
    let gamma = e.number_or("model.gamma", 0.0)?;
    if model == Model::Standard && gamma != 0.0 {
        return Err(invalid(e.line("model.gamma"), "model.gamma", "must be 0 for the standard model"));
    }
    let hbar = e.number_or("physics.hbar", 1.0)?;
    let mass = e.number_or("physics.mass", 1.0)?;
    let constants =
        PhysicalConstants::new(hbar, mass).map_err(|err| invalid(e.line("physics.hbar"), "physics.hbar", err.to_string()))?;

    let pot_line = e.line("potential.type");
    let potential = match e.string("potential.type")?.as_str() {
        "free" => PotentialSpec::Free,
        "harmonic" => PotentialSpec::Harmonic { omega: e.number("potential.omega")?, center: e.number_or("potential.center", 0.0)? },
        "polynomial" => PotentialSpec::Polynomial {
            coefficients: [
                e.number_or("potential.c0", 0.0)?,
                e.number_or("potential.c1", 0.0)?,
                e.number_or("potential.c2", 0.0)?,
            ],
        },
        other => {
            return Err(invalid(pot_line, "potential.type", format!("must be free, harmonic or polynomial, got '{other}'")))
        }
    };

    let time = TimeSpec {
        t0: e.number_or("time.t0", 0.0)?,
        dt: e.number("time.dt")?,
        t_final: e.number("time.t_final")?,
        snapshot_every: e.count_or("time.snapshot_every", Some(1))?,
    };
    if time.snapshot_every == 0 {
        return Err(invalid(e.line("time.snapshot_every"), "time.snapshot_every", "must be >= 1"));
    }

    let init_line = e.line("initial.type");
    let initial = match e.string("initial.type")?.as_str() {
        "gaussian" => InitialState::Gaussian {
            center: e.number("initial.center")?,
            sigma: e.number("initial.sigma")?,
            momentum: e.number_or("initial.momentum", 0.0)?,
        },
        "superposition" => {
            let line = e.line("initial.centers");
            let c = e.numbers("initial.centers")?;
            if c.len() != 2 {
                return Err(invalid(line, "initial.centers", "expected two comma-separated centres"));
            }
            InitialState::Superposition {
                centers: [c[0], c[1]],
                sigma: e.number("initial.sigma")?,
                phase: e.number_or("initial.phase", 0.0)?,
            }
        }
        other => {
            return Err(invalid(init_line, "initial.type", format!("must be gaussian or superposition, got '{other}'")))
        }
    };
    let (sigma, centers) = match &initial {
        InitialState::Gaussian { center, sigma, .. } => (*sigma, vec![*center]),
        InitialState::Superposition { centers, sigma, .. } => (*sigma, centers.to_vec()),
    };
    if !(sigma > 0.0) {
        return Err(invalid(e.line("initial.sigma"), "initial.sigma", "must be > 0"));
    }
    if centers.iter().any(|c| !grid.contains(*c)) {
        return Err(invalid(e.line("initial.type"), "initial.center", "packet centre lies outside the grid"));
    }

    let n_trajectories = e.count_or("ensemble.n_trajectories", Some(0))?;
    let sampling_line = e.line("ensemble.sampling");
    let sampling = match e.raw("ensemble.sampling").map(|r| r.1).as_deref() {
        None | Some("quantile") => SamplingScheme::Quantile,
        Some("equal_spacing") => SamplingScheme::EqualSpacing,
        Some("random") => {
            let seed_line = e.line("ensemble.seed");
            let seed = e.string("ensemble.seed")?;
            SamplingScheme::Random {
                seed: seed.parse().map_err(|_| invalid(seed_line, "ensemble.seed", "expected an unsigned integer"))?,
            }
        }
        Some(other) => {
            return Err(invalid(
                sampling_line,
                "ensemble.sampling",
                format!("must be quantile, equal_spacing or random, got '{other}'"),
            ))
        }
    };
    let ens_dt = e.number_or("ensemble.dt", time.dt * time.snapshot_every as f64)?;
    if n_trajectories == 1 {
        return Err(invalid(e.line("ensemble.n_trajectories"), "ensemble.n_trajectories", "must be 0 or >= 2"));
    }
    if !(ens_dt > 0.0) {
        return Err(invalid(e.line("ensemble.dt"), "ensemble.dt", "must be > 0"));
    }
    let spacing = time.dt * time.snapshot_every as f64;
    if n_trajectories > 0 && spacing > crate::trajectory::MAX_SNAPSHOT_RATIO * ens_dt * (1.0 + 1e-9) {
        return Err(invalid(
            e.line("ensemble.dt"),
            "ensemble.dt",
            format!("snapshot spacing {spacing} exceeds {} x ensemble.dt", crate::trajectory::MAX_SNAPSHOT_RATIO),
        ));
    }

    let setup = MatterWaveSetup {
        model,
        gamma,
        constants,
        potential,
        grid,
        time,
        initial,
        ensemble: EnsembleSpec { n_trajectories, sampling, dt: ens_dt },
    };
    setup
        .propagator_config()
        .validate(&grid)
        .map_err(|err| invalid(e.line("time.dt"), "time.dt", err.to_string()))?;
    Ok(setup)
}

fn optics(e: &mut Entries, grid: GridSpec) -> Result<OpticsSetup, ScenarioError> {
    let wavelength = e.number("optics.wavelength")?;
    if !(wavelength > 0.0) {
        return Err(invalid(e.line("optics.wavelength"), "optics.wavelength", "must be > 0"));
    }
    let mut slit_ids: Vec<u32> = e
        .map
        .keys()
        .filter_map(|k| k.split_once('.').map(|(s, _)| s))
        .filter(|s| is_slit_section(s))
        .filter_map(|s| s[4..].parse().ok())
        .collect();
    slit_ids.sort_unstable();
    slit_ids.dedup();
    if slit_ids.is_empty() {
        return Err(invalid(None, "slit1.sigma", "at least one slit is required"));
    }
    let mut slits = Vec::new();
    for (i, id) in slit_ids.iter().enumerate() {
        let key = |k: &str| format!("slit{id}.{k}");
        if *id as usize != i + 1 {
            return Err(invalid(e.line(&key("sigma")), &key("sigma"), "slits must be numbered 1, 2, … without gaps"));
        }
        let sigma = e.number(&key("sigma"))?;
        let center = e.number(&key("center"))?;
        let window = match e.raw(&key("window")) {
            Some((line, text)) => Some(e.number_at(line, &key("window"), &text)?),
            None => None,
        };
        let slit = SlitSpec { sigma, center, window_halfwidth: window };
        if !(sigma > 0.0) || window.is_some_and(|w| !(w > 0.0)) {
            return Err(invalid(e.line(&key("sigma")), &key("sigma"), "sigma and window must be > 0"));
        }
        slits.push(slit);
    }

    let (ranges_line, ranges_text) = e.required_raw("planes.ranges")?;
    let mut planes = Vec::new();
    for r in list(&ranges_text) {
        let parts: Vec<&str> = r.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(invalid(Some(ranges_line), "planes.ranges", format!("expected 'start : step : stop', got '{r}'")));
        }
        let v = parts.iter().map(|p| e.number_at(ranges_line, "planes.ranges", p)).collect::<Result<Vec<_>, _>>()?;
        let range = PlaneRange { start: v[0], step: v[1], stop: v[2] };
        if !(range.start > 0.0 && range.step > 0.0 && range.stop >= range.start) {
            return Err(invalid(Some(ranges_line), "planes.ranges", format!("need 0 < start <= stop and step > 0 in '{r}'")));
        }
        planes.push(range);
    }
    if planes.is_empty() {
        return Err(invalid(Some(ranges_line), "planes.ranges", "no ranges given"));
    }
    let report_planes = match e.raw("planes.report") {
        Some((line, text)) => {
            let v = list(&text).iter().map(|t| e.number_at(line, "planes.report", t)).collect::<Result<Vec<_>, _>>()?;
            if v.iter().any(|z| !(*z > 0.0)) {
                return Err(invalid(Some(line), "planes.report", "distances must be > 0"));
            }
            v
        }
        None => Vec::new(),
    };
    let paths_per_slit = e.count_or("paths.per_slit", Some(0))?;
    let ds = e.number_or("paths.ds", 0.01)?;
    if !(ds > 0.0) {
        return Err(invalid(e.line("paths.ds"), "paths.ds", "must be > 0"));
    }
    let setup = OpticsSetup { wavelength, slits, grid, planes, report_planes, paths_per_slit, ds };
    let scene = setup.scene().map_err(|err| invalid(Some(ranges_line), "planes.ranges", err.to_string()))?;
    let initial = crate::optics::initial_two_slit_field(&scene).map_err(|err| invalid(None, "slit1.sigma", err.to_string()))?;
    crate::optics::check_resolution(&initial, &scene).map_err(|err| invalid(e.line("grid.n_points"), "grid.n_points", err.to_string()))?;
    Ok(setup)
}

/// Shortest round-trip decimal; plain notation for moderate magnitudes.
fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn len(v: f64) -> String {
    format!("{} m", num(v))
}

/// Canonical text of a scenario; `parse_scenario(&emit_scenario(c)) == c`.
pub fn emit_scenario(c: &ScenarioConfig) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("scenario.name", c.name.clone());
    kv("scenario.kind", c.kind().name().into());
    if !c.description.is_empty() {
        kv("scenario.description", c.description.clone());
    }
    if !c.assumptions.is_empty() {
        kv("scenario.assumptions", c.assumptions.join("; "));
    }
    match &c.setup {
        Setup::MatterWave(m) => {
            kv("model.type", m.model.name().into());
            kv("model.gamma", num(m.gamma));
            kv("physics.hbar", num(m.constants.hbar()));
            kv("physics.mass", num(m.constants.mass()));
            kv("potential.type", m.potential.name().into());
            match &m.potential {
                PotentialSpec::Harmonic { omega, center } => {
                    kv("potential.omega", num(*omega));
                    kv("potential.center", num(*center));
                }
                PotentialSpec::Polynomial { coefficients: [c0, c1, c2] } => {
                    kv("potential.c0", num(*c0));
                    kv("potential.c1", num(*c1));
                    kv("potential.c2", num(*c2));
                }
                PotentialSpec::Free | PotentialSpec::Tabulated(_) => {}
            }
            kv("grid.x_min", num(m.grid.x_min()));
            kv("grid.x_max", num(m.grid.x_max()));
            kv("grid.n_points", m.grid.n_points().to_string());
            kv("time.t0", num(m.time.t0));
            kv("time.dt", num(m.time.dt));
            kv("time.t_final", num(m.time.t_final));
            kv("time.snapshot_every", m.time.snapshot_every.to_string());
            match &m.initial {
                InitialState::Gaussian { center, sigma, momentum } => {
                    kv("initial.type", "gaussian".into());
                    kv("initial.center", num(*center));
                    kv("initial.sigma", num(*sigma));
                    kv("initial.momentum", num(*momentum));
                }
                InitialState::Superposition { centers, sigma, phase } => {
                    kv("initial.type", "superposition".into());
                    kv("initial.centers", format!("{}, {}", num(centers[0]), num(centers[1])));
                    kv("initial.sigma", num(*sigma));
                    kv("initial.phase", num(*phase));
                }
            }
            kv("ensemble.n_trajectories", m.ensemble.n_trajectories.to_string());
            kv("ensemble.sampling", m.ensemble.sampling.name().into());
            if let Some(seed) = m.ensemble.sampling.seed() {
                kv("ensemble.seed", seed.to_string());
            }
            kv("ensemble.dt", num(m.ensemble.dt));
        }
        Setup::Optics(o) => {
            kv("optics.wavelength", len(o.wavelength));
            for (i, sl) in o.slits.iter().enumerate() {
                kv(&format!("slit{}.sigma", i + 1), len(sl.sigma));
                kv(&format!("slit{}.center", i + 1), len(sl.center));
                if let Some(w) = sl.window_halfwidth {
                    kv(&format!("slit{}.window", i + 1), len(w));
                }
            }
            kv("grid.x_min", len(o.grid.x_min()));
            kv("grid.x_max", len(o.grid.x_max()));
            kv("grid.n_points", o.grid.n_points().to_string());
            let ranges: Vec<String> =
                o.planes.iter().map(|r| format!("{} : {} : {}", len(r.start), len(r.step), len(r.stop))).collect();
            kv("planes.ranges", ranges.join(", "));
            if !o.report_planes.is_empty() {
                kv("planes.report", o.report_planes.iter().map(|z| len(*z)).collect::<Vec<_>>().join(", "));
            }
            kv("paths.per_slit", o.paths_per_slit.to_string());
            kv("paths.ds", len(o.ds));
        }
    }
    if !c.outputs.is_empty() {
        kv("outputs.artifacts", c.outputs.iter().map(|a| a.name()).collect::<Vec<_>>().join(", "));
    }
    if !c.required_checks.is_empty() {
        kv("checks.required", c.required_checks.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
scenario.name = tiny
scenario.kind = matter_wave
model.type = standard
potential.type = free
grid.x_min = -20
grid.x_max = 20
grid.n_points = 256
time.dt = 0.01
time.t_final = 1
initial.type = gaussian
initial.center = 0
initial.sigma = 1
";

    #[test]
    fn empty_input_fails_on_line_one() {
        assert_eq!(parse_scenario(""), Err(ScenarioError::Parse { line: 1, reason: "empty scenario".into() }));
        assert!(matches!(parse_scenario("# only a comment\n\n"), Err(ScenarioError::Parse { line: 1, .. })));
    }

    #[test]
    fn minimal_matter_wave_defaults() {
        let c = parse_scenario(MINIMAL).unwrap();
        let m = c.matter_wave().unwrap();
        assert_eq!(m.constants, PhysicalConstants::natural());
        assert_eq!(m.time.snapshot_every, 1);
        assert_eq!(m.ensemble.n_trajectories, 0);
        assert_eq!(parse_scenario(&emit_scenario(&c)).unwrap(), c);
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let bad = MINIMAL.replace("time.dt = 0.01", "time.dt 0.01");
        assert_eq!(parse_scenario(&bad), Err(ScenarioError::Parse { line: 8, reason: "expected 'section.key = value'".into() }));
        let dup = format!("{MINIMAL}grid.n_points = 512\n");
        assert!(matches!(parse_scenario(&dup), Err(ScenarioError::Parse { line: 13, .. })));
        let malformed = MINIMAL.replace("grid.x_min", "gridx_min");
        assert!(matches!(parse_scenario(&malformed), Err(ScenarioError::Parse { line: 5, .. })));
    }

    #[test]
    fn unknown_and_misplaced_keys_are_rejected() {
        let typo = format!("{MINIMAL}time.snapshot_evry = 3\n");
        assert_eq!(
            parse_scenario(&typo),
            Err(ScenarioError::Validation { line: Some(13), key: "time.snapshot_evry".into(), constraint: "unknown key".into() })
        );
        let optics_key = format!("{MINIMAL}optics.wavelength = 943 nm\n");
        let err = parse_scenario(&optics_key).unwrap_err();
        assert!(err.to_string().contains("not valid for matter_wave"), "{err}");
        let unused = format!("{MINIMAL}potential.omega = 1\n");
        assert!(parse_scenario(&unused).unwrap_err().to_string().contains("not used"));
    }

    #[test]
    fn validation_errors() {
        let missing = MINIMAL.replace("time.dt = 0.01\n", "");
        assert_eq!(
            parse_scenario(&missing),
            Err(ScenarioError::Validation { line: None, key: "time.dt".into(), constraint: "missing required key".into() })
        );
        let unit = MINIMAL.replace("time.dt = 0.01", "time.dt = 0.01 mm");
        assert!(matches!(parse_scenario(&unit), Err(ScenarioError::Validation { line: Some(8), .. })));
        let unstable = MINIMAL.replace("time.dt = 0.01", "time.dt = 5");
        assert!(parse_scenario(&unstable).unwrap_err().to_string().contains("time.dt"));
        let gamma = format!("{MINIMAL}model.gamma = 0.1\n");
        assert!(parse_scenario(&gamma).is_err());
    }

    #[test]
    fn lengths_with_units() {
        assert_eq!(parse_length("0.3 mm").unwrap(), 0.0003);
        assert_eq!(parse_length("943 nm").unwrap(), 943e-9);
        assert_eq!(parse_length("943nm").unwrap(), 943e-9);
        assert_eq!(parse_length("2.5e1 um").unwrap(), 25e-6);
        assert_eq!(parse_length("3").unwrap(), 3.0);
        assert_eq!(parse_length("-2.35 mm").unwrap(), -2.35e-3);
        assert!(parse_length("mm").is_err());
        assert!(parse_length("3 km").is_err());
    }
}
