//! Scenario configuration files.
//!
//! Flat INI-style text: `[section]` headers, `key = value` lines, and
//! comments starting with `#` or `;`. Every key belongs to a section, keys may
//! appear once per section (except `wave` in `[source]`), and unknown
//! sections or keys are errors. All diagnostics carry the line number.
//!
//! ```text
//! [grid]
//! n = 32            # or "nx ny nz"
//! length = 1.0      # or spacing = dx [dy dz]
//!
//! [source]
//! kind = plane-waves
//! wave = 6.283185307179586 0 0  1.0 +  0.0   # kx ky kz amplitude pol phase
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Grid3, Helicity, UnitsConfig};
use crate::propagator::Method;
use crate::vortex::{LGBeamParams, PlaneWaveSpec};

/// One `key = value` line.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Raw parse of an INI file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IniDocument {
    pub sections: Vec<Section>,
}

fn config_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}

impl IniDocument {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut doc = IniDocument::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = strip_comment(raw).trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| config_err(path, line, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(config_err(path, line, "empty section name"));
                }
                if let Some(prev) = doc.sections.iter().find(|sec| sec.name == name) {
                    return Err(config_err(
                        path,
                        line,
                        format!("section [{name}] already defined on line {}", prev.line),
                    ));
                }
                doc.sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| config_err(path, line, format!("expected `key = value`, found `{s}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(config_err(path, line, "missing key before `=`"));
            }
            let section = doc
                .sections
                .last_mut()
                .ok_or_else(|| config_err(path, line, format!("key `{key}` outside any section")))?;
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(doc)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

/// Typed access to one section, tracking which keys were consumed.
struct Reader<'a> {
    path: &'a Path,
    section: &'a Section,
}

impl<'a> Reader<'a> {
    fn new(path: &'a Path, section: &'a Section, allowed: &[&str], repeatable: &[&str]) -> Result<Self> {
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &section.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(config_err(
                    path,
                    e.line,
                    format!(
                        "unknown key `{}` in [{}] (allowed: {})",
                        e.key,
                        section.name,
                        allowed.join(", ")
                    ),
                ));
            }
            if let Some(prev) = seen.insert(&e.key, e.line) {
                if !repeatable.contains(&e.key.as_str()) {
                    return Err(config_err(
                        path,
                        e.line,
                        format!("duplicate key `{}` (first set on line {prev})", e.key),
                    ));
                }
            }
        }
        Ok(Reader { path, section })
    }

    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.entries.iter().find(|e| e.key == key)
    }

    fn all(&self, key: &str) -> impl Iterator<Item = &'a Entry> + '_ {
        let key = key.to_string();
        self.section.entries.iter().filter(move |e| e.key == key)
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        config_err(self.path, line, msg)
    }

    fn missing(&self, key: &str) -> Error {
        self.err(
            self.section.line,
            format!("[{}] requires key `{key}`", self.section.name),
        )
    }

    fn parse_value<T: FromStr>(&self, e: &Entry, word: &str) -> Result<T>
    where
        T::Err: Display,
    {
        word.parse::<T>()
            .map_err(|err| self.err(e.line, format!("`{}`: cannot parse `{word}`: {err}", e.key)))
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.entry(key).map(|e| self.parse_value(e, &e.value)).transpose()
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.opt(key)?.ok_or_else(|| self.missing(key))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn list<T: FromStr>(&self, e: &Entry) -> Result<Vec<T>>
    where
        T::Err: Display,
    {
        e.value
            .split_whitespace()
            .map(|w| self.parse_value(e, w))
            .collect()
    }

    /// One value broadcast to three, or exactly three values.
    fn triple<T: FromStr + Copy>(&self, key: &str) -> Result<Option<[T; 3]>>
    where
        T::Err: Display,
    {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        match self.list::<T>(e)?.as_slice() {
            [v] => Ok(Some([*v; 3])),
            [a, b, c] => Ok(Some([*a, *b, *c])),
            other => Err(self.err(e.line, format!("`{key}` takes 1 or 3 values, got {}", other.len()))),
        }
    }

    fn helicity(&self, key: &str) -> Result<Option<Helicity>> {
        self.entry(key)
            .map(|e| parse_helicity(&e.value).ok_or_else(|| self.err(e.line, format!("`{key}` must be + or -, got `{}`", e.value))))
            .transpose()
    }

    fn positive(&self, key: &str, v: f64) -> Result<f64> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            let line = self.entry(key).map_or(self.section.line, |e| e.line);
            Err(self.err(line, format!("`{key}` must be a positive finite number, got {v}")))
        }
    }
}

fn parse_helicity(s: &str) -> Option<Helicity> {
    match s {
        "+" | "+1" | "1" | "plus" => Some(Helicity::Plus),
        "-" | "-1" | "minus" => Some(Helicity::Minus),
        _ => None,
    }
}

/// Where the initial field comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum SourceConfig {
    RandomTransverse {
        seed: u64,
        max_mode: usize,
        helicity: Helicity,
    },
    PlaneWaves {
        waves: Vec<PlaneWaveSpec>,
        branch: Helicity,
        t: f64,
    },
    LgBeam {
        params: LGBeamParams,
        /// Amplitude of an added counter-propagating circular plane wave.
        counter_amplitude: f64,
        branch: Helicity,
        t: f64,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationSection {
    pub t_final: f64,
    pub dt: Option<f64>,
    pub method: Method,
    pub sign: Option<Helicity>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChecksConfig {
    pub trials: usize,
    pub seed: u64,
    /// Overrides of per-check tolerances, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig {
            trials: 100,
            seed: 0,
            tolerances: BTreeMap::new(),
        }
    }
}

impl ChecksConfig {
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionSection {
    pub n: [usize; 4],
    pub spacing: f64,
    pub a_norm: f64,
    pub include_l0: bool,
    pub seed: u64,
    pub momentum_trials: usize,
    pub signature_n: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub field: String,
    pub spectrum: String,
    pub lines: String,
    pub report: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            field: "field.rsf".into(),
            spectrum: "spectrum.csv".into(),
            lines: "vortex_lines.csv".into(),
            report: "report.txt".into(),
        }
    }
}

/// Fully parsed and validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub path: PathBuf,
    pub grid: Option<Grid3>,
    pub units: UnitsConfig,
    pub source: Option<SourceConfig>,
    pub propagation: Option<PropagationSection>,
    pub checks: ChecksConfig,
    pub action: Option<ActionSection>,
    pub output: OutputConfig,
    /// Sections present in the file.
    pub present: Vec<String>,
}

const SECTIONS: [&str; 7] = ["grid", "units", "source", "propagation", "checks", "action", "output"];

impl ScenarioConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// `path` is used for diagnostics and to resolve relative source files.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let doc = IniDocument::parse(text, path)?;
        for s in &doc.sections {
            if !SECTIONS.contains(&s.name.as_str()) {
                return Err(config_err(
                    path,
                    s.line,
                    format!("unknown section [{}] (allowed: {})", s.name, SECTIONS.join(", ")),
                ));
            }
        }
        let base = path.parent().unwrap_or(Path::new("."));

        let units = match doc.section("units") {
            None => UnitsConfig::default(),
            Some(s) => {
                let r = Reader::new(path, s, &["c", "hbar"], &[])?;
                let c = r.or("c", 1.0)?;
                let hbar = r.or("hbar", 1.0)?;
                UnitsConfig::new(c, hbar).map_err(|e| r.err(s.line, e.to_string()))?
            }
        };

        let grid = doc.section("grid").map(|s| parse_grid(path, s)).transpose()?;
        let source = doc
            .section("source")
            .map(|s| parse_source(path, s, base))
            .transpose()?;

        let propagation = doc
            .section("propagation")
            .map(|s| {
                let r = Reader::new(path, s, &["t_final", "dt", "method", "sign"], &[])?;
                let t_final: f64 = r.get("t_final")?;
                if !(t_final.is_finite() && t_final >= 0.0) {
                    return Err(r.err(r.entry("t_final").map_or(s.line, |e| e.line), "`t_final` must be >= 0"));
                }
                let dt = r.opt::<f64>("dt")?.map(|v| r.positive("dt", v)).transpose()?;
                let method = match r.entry("method") {
                    None => Method::Spectral,
                    Some(e) => match e.value.as_str() {
                        "spectral" => Method::Spectral,
                        "fd" | "finite-difference" => Method::FiniteDifference,
                        other => {
                            return Err(r.err(e.line, format!("`method` must be spectral or fd, got `{other}`")))
                        }
                    },
                };
                Ok(PropagationSection {
                    t_final,
                    dt,
                    method,
                    sign: r.helicity("sign")?,
                })
            })
            .transpose()?;

        let checks = match doc.section("checks") {
            None => ChecksConfig::default(),
            Some(s) => {
                let mut tolerances = BTreeMap::new();
                for e in &s.entries {
                    if let Some(name) = e.key.strip_prefix("tol.") {
                        if name.is_empty() {
                            return Err(config_err(path, e.line, "empty check name after `tol.`"));
                        }
                        let v: f64 = e
                            .value
                            .parse()
                            .map_err(|err| config_err(path, e.line, format!("`{}`: {err}", e.key)))?;
                        if !(v.is_finite() && v >= 0.0) {
                            return Err(config_err(path, e.line, "tolerances must be finite and >= 0"));
                        }
                        if tolerances.insert(name.to_string(), v).is_some() {
                            return Err(config_err(path, e.line, format!("duplicate key `{}`", e.key)));
                        }
                    }
                }
                let rest = Section {
                    name: s.name.clone(),
                    line: s.line,
                    entries: s.entries.iter().filter(|e| !e.key.starts_with("tol.")).cloned().collect(),
                };
                let r = Reader::new(path, &rest, &["trials", "seed"], &[])?;
                ChecksConfig {
                    trials: r.or("trials", 100)?,
                    seed: r.or("seed", 0)?,
                    tolerances,
                }
            }
        };

        let action = doc
            .section("action")
            .map(|s| {
                let r = Reader::new(
                    path,
                    s,
                    &["n", "spacing", "a_norm", "include_l0", "seed", "momentum_trials", "signature_n"],
                    &[],
                )?;
                let e = r.entry("n").ok_or_else(|| r.missing("n"))?;
                let n = match r.list::<usize>(e)?.as_slice() {
                    [v] => [*v; 4],
                    [a, b, c, d] => [*a, *b, *c, *d],
                    other => return Err(r.err(e.line, format!("`n` takes 1 or 4 values, got {}", other.len()))),
                };
                if n.iter().any(|&v| v < 2) {
                    return Err(r.err(e.line, "lattice extents must be >= 2"));
                }
                let spacing = r.or("spacing", 1.0)?;
                let a_norm = r.or("a_norm", 0.75)?;
                let signature_n: usize = r.or("signature_n", 8)?;
                if signature_n < 2 {
                    return Err(r.err(r.entry("signature_n").map_or(s.line, |e| e.line), "`signature_n` must be >= 2"));
                }
                Ok(ActionSection {
                    n,
                    spacing: r.positive("spacing", spacing)?,
                    a_norm: r.positive("a_norm", a_norm)?,
                    include_l0: r.or("include_l0", true)?,
                    seed: r.or("seed", 0)?,
                    momentum_trials: r.or("momentum_trials", 100)?,
                    signature_n,
                })
            })
            .transpose()?;

        let output = match doc.section("output") {
            None => OutputConfig::default(),
            Some(s) => {
                let r = Reader::new(path, s, &["field", "spectrum", "lines", "report"], &[])?;
                let d = OutputConfig::default();
                let name = |key: &str, default: String| -> Result<String> {
                    match r.entry(key) {
                        None => Ok(default),
                        Some(e) if e.value.is_empty() || e.value.contains(['/', '\\']) => Err(r.err(
                            e.line,
                            format!("`{key}` must be a plain file name inside the output directory"),
                        )),
                        Some(e) => Ok(e.value.clone()),
                    }
                };
                OutputConfig {
                    field: name("field", d.field)?,
                    spectrum: name("spectrum", d.spectrum)?,
                    lines: name("lines", d.lines)?,
                    report: name("report", d.report)?,
                }
            }
        };

        Ok(ScenarioConfig {
            path: path.to_path_buf(),
            grid,
            units,
            source,
            propagation,
            checks,
            action,
            output,
            present: doc.sections.iter().map(|s| s.name.clone()).collect(),
        })
    }

    /// Fails unless every named section is present.
    pub fn require(&self, subcommand: &str, sections: &[&str]) -> Result<()> {
        for s in sections {
            if !self.present.iter().any(|p| p == s) {
                return Err(config_err(
                    &self.path,
                    0,
                    format!("subcommand `{subcommand}` requires a [{s}] section"),
                ));
            }
        }
        Ok(())
    }
}

fn parse_grid(path: &Path, s: &Section) -> Result<Grid3> {
    let r = Reader::new(path, s, &["n", "length", "spacing", "origin"], &[])?;
    let n: [usize; 3] = r.triple("n")?.ok_or_else(|| r.missing("n"))?;
    let spacing = match (r.triple::<f64>("length")?, r.triple::<f64>("spacing")?) {
        (Some(_), Some(_)) => {
            return Err(r.err(
                r.entry("spacing").map_or(s.line, |e| e.line),
                "give either `length` or `spacing`, not both",
            ))
        }
        (Some(l), None) => [0, 1, 2].map(|a| l[a] / n[a].max(1) as f64),
        (None, Some(d)) => d,
        (None, None) => return Err(r.missing("length")),
    };
    let origin = r.triple("origin")?.unwrap_or([0.0; 3]);
    Grid3::new(n, spacing, origin).map_err(|e| r.err(s.line, e.to_string()))
}

fn parse_wave(r: &Reader<'_>, e: &Entry) -> Result<PlaneWaveSpec> {
    let words: Vec<&str> = e.value.split_whitespace().collect();
    if words.len() != 6 {
        return Err(r.err(
            e.line,
            format!("`wave` takes `kx ky kz amplitude polarization phase`, got {} values", words.len()),
        ));
    }
    let num = |w: &str| r.parse_value::<f64>(e, w);
    let k = [num(words[0])?, num(words[1])?, num(words[2])?];
    if k == [0.0; 3] {
        return Err(r.err(e.line, "`wave` wavevector must be nonzero"));
    }
    let polarization = parse_helicity(words[4])
        .ok_or_else(|| r.err(e.line, format!("`wave` polarization must be + or -, got `{}`", words[4])))?;
    Ok(PlaneWaveSpec {
        k,
        amplitude: num(words[3])?,
        polarization,
        phase: num(words[5])?,
    })
}

fn parse_source(path: &Path, s: &Section, base: &Path) -> Result<SourceConfig> {
    let kind_entry = s
        .entries
        .iter()
        .find(|e| e.key == "kind")
        .ok_or_else(|| config_err(path, s.line, "[source] requires key `kind`"))?;
    match kind_entry.value.as_str() {
        "random-transverse" => {
            let r = Reader::new(path, s, &["kind", "seed", "max_mode", "helicity"], &[])?;
            Ok(SourceConfig::RandomTransverse {
                seed: r.get("seed")?,
                max_mode: r.or("max_mode", 4)?,
                helicity: r.helicity("helicity")?.unwrap_or(Helicity::Plus),
            })
        }
        "plane-waves" => {
            let r = Reader::new(path, s, &["kind", "wave", "branch", "t"], &["wave"])?;
            let waves = r.all("wave").map(|e| parse_wave(&r, e)).collect::<Result<Vec<_>>>()?;
            if waves.is_empty() {
                return Err(r.missing("wave"));
            }
            Ok(SourceConfig::PlaneWaves {
                waves,
                branch: r.helicity("branch")?.unwrap_or(Helicity::Plus),
                t: r.or("t", 0.0)?,
            })
        }
        "lg-beam" => {
            let r = Reader::new(
                path,
                s,
                &[
                    "kind",
                    "waist",
                    "wavelength",
                    "l",
                    "p",
                    "polarization",
                    "amplitude",
                    "axis",
                    "focus_z",
                    "counter_amplitude",
                    "branch",
                    "t",
                ],
                &[],
            )?;
            let mut params = LGBeamParams::new(
                r.get("waist")?,
                r.get("wavelength")?,
                r.or("l", 0)?,
                r.or("p", 0)?,
                r.helicity("polarization")?.unwrap_or(Helicity::Plus),
            )
            .map_err(|e| r.err(s.line, e.to_string()))?;
            params.amplitude = r.or("amplitude", 1.0)?;
            if let Some(e) = r.entry("axis") {
                match r.list::<f64>(e)?.as_slice() {
                    [x, y] => params.axis = [*x, *y],
                    other => return Err(r.err(e.line, format!("`axis` takes 2 values, got {}", other.len()))),
                }
            }
            params.focus_z = r.or("focus_z", 0.0)?;
            params.validate().map_err(|e| r.err(s.line, e.to_string()))?;
            Ok(SourceConfig::LgBeam {
                params,
                counter_amplitude: r.or("counter_amplitude", 0.0)?,
                branch: r.helicity("branch")?.unwrap_or(Helicity::Plus),
                t: r.or("t", 0.0)?,
            })
        }
        "file" => {
            let r = Reader::new(path, s, &["kind", "path"], &[])?;
            let e = r.entry("path").ok_or_else(|| r.missing("path"))?;
            let p = Path::new(&e.value);
            Ok(SourceConfig::File {
                path: if p.is_absolute() { p.to_path_buf() } else { base.join(p) },
            })
        }
        other => Err(config_err(
            path,
            kind_entry.line,
            format!("unknown source kind `{other}` (expected random-transverse, plane-waves, lg-beam or file)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::parse(text, Path::new("/tmp/cfg.ini"))
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Config { line, .. } => line,
            other => panic!("not a config error: {other:?}"),
        }
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            "# comment\n\
             [grid]\n\
             n = 8 8 16\n\
             length = 1 1 2 ; trailing\n\
             [units]\n\
             c = 2\n\
             [source]\n\
             kind = plane-waves\n\
             wave = 6.28 0 0 1 + 0\n\
             wave = 0 0 -6.5 0.5 minus 1.5\n\
             branch = -\n\
             [propagation]\n\
             t_final = 0.5\n\
             method = fd\n\
             [checks]\n\
             trials = 7\n\
             seed = 42\n\
             tol.energy_drift = 1e-9\n\
             [output]\n\
             field = out.rsf\n",
        )
        .unwrap();
        let g = cfg.grid.unwrap();
        assert_eq!(g.dims(), [8, 8, 16]);
        assert_eq!(g.spacing(), [0.125; 3]);
        assert_eq!(cfg.units.c, 2.0);
        match cfg.source.unwrap() {
            SourceConfig::PlaneWaves { waves, branch, t } => {
                assert_eq!(waves.len(), 2);
                assert_eq!(waves[1].polarization, Helicity::Minus);
                assert_eq!(waves[1].k, [0.0, 0.0, -6.5]);
                assert_eq!(branch, Helicity::Minus);
                assert_eq!(t, 0.0);
            }
            other => panic!("{other:?}"),
        }
        let p = cfg.propagation.unwrap();
        assert_eq!(p.method, Method::FiniteDifference);
        assert_eq!(p.dt, None);
        assert_eq!(cfg.checks.trials, 7);
        assert_eq!(cfg.checks.tolerance("energy_drift", 1.0), 1e-9);
        assert_eq!(cfg.checks.tolerance("other", 1.0), 1.0);
        assert_eq!(cfg.output.field, "out.rsf");
        assert_eq!(cfg.output.report, "report.txt");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert_eq!(line_of(parse("[grid]\nn = 4\nlength = 1\nbogus = 3\n").unwrap_err()), 4);
        assert_eq!(line_of(parse("\n\n[nope]\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("x = 1\n").unwrap_err()), 1);
        assert_eq!(line_of(parse("[grid]\nn = four\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("[grid]\nn = 4\nn = 5\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("[grid\n").unwrap_err()), 1);
        assert_eq!(line_of(parse("[checks]\n[checks]\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("[source]\nkind = plane-waves\nwave = 1 0 0 1 x 0\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("[propagation]\nt_final = 1\nmethod = euler\n").unwrap_err()), 3);
        let msg = parse("[grid]\nn = 4\nlength = 1\nbogus = 3\n").unwrap_err().to_string();
        assert!(msg.starts_with("/tmp/cfg.ini:4:"), "{msg}");
    }

    #[test]
    fn sources() {
        let cfg = parse("[source]\nkind = file\npath = in.rsf\n").unwrap();
        assert_eq!(
            cfg.source,
            Some(SourceConfig::File { path: PathBuf::from("/tmp/in.rsf") })
        );
        let cfg = parse("[source]\nkind = lg-beam\nwaist = 1\nwavelength = 0.5\nl = 1\ncounter_amplitude = 0.2\n").unwrap();
        match cfg.source.unwrap() {
            SourceConfig::LgBeam { params, counter_amplitude, .. } => {
                assert_eq!(params.l, 1);
                assert_eq!(counter_amplitude, 0.2);
            }
            other => panic!("{other:?}"),
        }
        // keys of one kind are rejected for another
        assert!(parse("[source]\nkind = file\npath = a\nseed = 3\n").is_err());
        assert!(parse("[source]\nkind = random-transverse\n").is_err());
        assert!(parse("[source]\nkind = magic\n").is_err());
    }

    #[test]
    fn requirements_and_action() {
        let cfg = parse("[action]\nn = 4\nseed = 3\n").unwrap();
        let a = cfg.action.clone().unwrap();
        assert_eq!(a.n, [4; 4]);
        assert_eq!(a.a_norm, 0.75);
        assert!(a.include_l0);
        assert!(cfg.require("check-action", &["action"]).is_ok());
        let err = cfg.require("propagate", &["grid", "source"]).unwrap_err();
        assert!(err.to_string().contains("[grid]"));
        assert!(parse("[action]\nn = 4 4\n").is_err());
        assert!(parse("[output]\nfield = ../x\n").is_err());
    }
}
