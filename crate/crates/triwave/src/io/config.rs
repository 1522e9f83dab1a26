//! Run configuration: flat `key = value` pairs under one level of
//! `[section]` headers. `#` starts a comment. Every field has a default;
//! parsing validates physical constraints with field-level messages, and
//! `serialize ∘ parse` is the identity on the semantic content.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::EvolveConfig;
use crate::fields::{band_limited, dressing_indices, gaussian};
use crate::grid::{make_grid, Grid};
use crate::solver::SolveOptions;
use crate::state::{Params, TriField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamsSection {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub omega: f64,
    pub c: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveSection {
    pub max_iters: usize,
    pub step_size: f64,
    pub tol_grad: f64,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveSection {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_every: usize,
    pub blowup_factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataKind {
    Gaussian,
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataSection {
    pub kind: DataKind,
    pub amp: [f64; 3],
    pub width: [f64; 3],
    /// Per-component center, one entry per axis.
    pub center: [Vec<f64>; 3],
    /// Per-component lattice phase indices, one entry per axis.
    pub wave: [Vec<i64>; 3],
    pub seed: u64,
    pub max_mode: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSection {
    pub c_values: Vec<f64>,
    pub axis: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: GridSection,
    pub params: ParamsSection,
    pub solve: SolveSection,
    pub evolve: EvolveSection,
    pub data: DataSection,
    pub scan: ScanSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridSection { dim: 1, n: 512, half_width: 4.0 * std::f64::consts::PI },
            params: ParamsSection {
                gamma1: 1.0,
                gamma2: 1.0,
                gamma3: 2.0,
                omega: 1.0,
                c: vec![0.0],
            },
            solve: SolveSection {
                max_iters: 20000,
                step_size: 0.1,
                tol_grad: 1e-6,
                restarts: 5,
                seed: 7,
            },
            evolve: EvolveSection { dt: 1e-3, t_final: 1.0, snapshot_every: 100, blowup_factor: 1e3 },
            data: DataSection {
                kind: DataKind::Gaussian,
                amp: [0.4, 0.3, 0.3],
                width: [1.5, 1.5, 1.5],
                center: [vec![0.0], vec![0.0], vec![0.0]],
                wave: [vec![0], vec![0], vec![0]],
                seed: 42,
                max_mode: 6,
            },
            scan: ScanSection { c_values: vec![2.0, 4.0, 8.0, 16.0], axis: 0 },
        }
    }
}

fn parse_scalar<T: std::str::FromStr>(section: &str, key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::Config(format!("[{section}] {key}: cannot parse `{raw}`")))
}

fn parse_list<T: std::str::FromStr>(section: &str, key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(|piece| parse_scalar(section, key, piece))
        .collect()
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            if current.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: key `{}` appears before any [section]",
                    lineno + 1,
                    key.trim()
                )));
            }
            sections
                .get_mut(&current)
                .expect("created above")
                .insert(key.trim().to_string(), value.trim().to_string());
        }

        for name in sections.keys() {
            if !["grid", "params", "solve", "evolve", "data", "scan"].contains(&name.as_str()) {
                return Err(Error::Config(format!("unknown section [{name}]")));
            }
        }

        let mut cfg = RunConfig::default();
        let empty = BTreeMap::new();
        let get = |sec: &str| sections.get(sec).unwrap_or(&empty);

        {
            let s = get("grid");
            if let Some(v) = s.get("dim") {
                cfg.grid.dim = parse_scalar("grid", "dim", v)?;
            }
            if let Some(v) = s.get("n") {
                cfg.grid.n = parse_scalar("grid", "n", v)?;
            }
            if let Some(v) = s.get("half_width") {
                cfg.grid.half_width = parse_scalar("grid", "half_width", v)?;
            }
        }
        let dim = cfg.grid.dim;
        // dimension-sized vector defaults
        cfg.params.c = vec![0.0; dim];
        for i in 0..3 {
            cfg.data.center[i] = vec![0.0; dim];
            cfg.data.wave[i] = vec![0; dim];
        }

        {
            let s = get("params");
            for (key, slot) in [
                ("gamma1", &mut cfg.params.gamma1),
                ("gamma2", &mut cfg.params.gamma2),
                ("gamma3", &mut cfg.params.gamma3),
                ("omega", &mut cfg.params.omega),
            ] {
                if let Some(v) = s.get(key) {
                    *slot = parse_scalar("params", key, v)?;
                }
            }
            if let Some(v) = s.get("c") {
                cfg.params.c = parse_list("params", "c", v)?;
            }
        }
        {
            let s = get("solve");
            if let Some(v) = s.get("max_iters") {
                cfg.solve.max_iters = parse_scalar("solve", "max_iters", v)?;
            }
            if let Some(v) = s.get("step_size") {
                cfg.solve.step_size = parse_scalar("solve", "step_size", v)?;
            }
            if let Some(v) = s.get("tol_grad") {
                cfg.solve.tol_grad = parse_scalar("solve", "tol_grad", v)?;
            }
            if let Some(v) = s.get("restarts") {
                cfg.solve.restarts = parse_scalar("solve", "restarts", v)?;
            }
            if let Some(v) = s.get("seed") {
                cfg.solve.seed = parse_scalar("solve", "seed", v)?;
            }
        }
        {
            let s = get("evolve");
            if let Some(v) = s.get("dt") {
                cfg.evolve.dt = parse_scalar("evolve", "dt", v)?;
            }
            if let Some(v) = s.get("t_final") {
                cfg.evolve.t_final = parse_scalar("evolve", "t_final", v)?;
            }
            if let Some(v) = s.get("snapshot_every") {
                cfg.evolve.snapshot_every = parse_scalar("evolve", "snapshot_every", v)?;
            }
            if let Some(v) = s.get("blowup_factor") {
                cfg.evolve.blowup_factor = parse_scalar("evolve", "blowup_factor", v)?;
            }
        }
        {
            let s = get("data");
            if let Some(v) = s.get("kind") {
                cfg.data.kind = match v.as_str() {
                    "gaussian" => DataKind::Gaussian,
                    "random" => DataKind::Random,
                    other => {
                        return Err(Error::Config(format!(
                            "[data] kind: expected gaussian|random, got `{other}`"
                        )))
                    }
                };
            }
            let comps = ["u", "v", "w"];
            for (i, comp) in comps.iter().enumerate() {
                if let Some(v) = s.get(&format!("amp_{comp}")) {
                    cfg.data.amp[i] = parse_scalar("data", &format!("amp_{comp}"), v)?;
                }
                if let Some(v) = s.get(&format!("width_{comp}")) {
                    cfg.data.width[i] = parse_scalar("data", &format!("width_{comp}"), v)?;
                }
                if let Some(v) = s.get(&format!("center_{comp}")) {
                    cfg.data.center[i] = parse_list("data", &format!("center_{comp}"), v)?;
                }
                if let Some(v) = s.get(&format!("wave_{comp}")) {
                    cfg.data.wave[i] = parse_list("data", &format!("wave_{comp}"), v)?;
                }
            }
            if let Some(v) = s.get("seed") {
                cfg.data.seed = parse_scalar("data", "seed", v)?;
            }
            if let Some(v) = s.get("max_mode") {
                cfg.data.max_mode = parse_scalar("data", "max_mode", v)?;
            }
        }
        {
            let s = get("scan");
            if let Some(v) = s.get("c_values") {
                cfg.scan.c_values = parse_list("scan", "c_values", v)?;
            }
            if let Some(v) = s.get("axis") {
                cfg.scan.axis = parse_scalar("scan", "axis", v)?;
            }
        }

        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level validation of the physical constraints, including
    /// commensurability of every configured velocity with the grid.
    pub fn validate(&self) -> Result<()> {
        let grid = self.build_grid().map_err(|e| Error::Config(format!("[grid] {e}")))?;
        let p = &self.params;
        for (key, g) in [("gamma1", p.gamma1), ("gamma2", p.gamma2), ("gamma3", p.gamma3)] {
            if !(g > 0.0) {
                return Err(Error::Config(format!("[params] {key} must be positive, got {g}")));
            }
        }
        if p.c.len() != self.grid.dim {
            return Err(Error::Config(format!(
                "[params] c must have {} component(s), got {}",
                self.grid.dim,
                p.c.len()
            )));
        }
        if p.c.iter().any(|&x| x != 0.0) {
            dressing_indices(&grid, [p.gamma1, p.gamma2, p.gamma3], &p.c)
                .map_err(|e| Error::Config(format!("[params] c: {e}")))?;
        }
        if !(self.evolve.dt > 0.0) {
            return Err(Error::Config(format!("[evolve] dt must be positive, got {}", self.evolve.dt)));
        }
        if self.evolve.t_final < self.evolve.dt {
            return Err(Error::Config("[evolve] t_final must be at least dt".into()));
        }
        if self.evolve.snapshot_every == 0 {
            return Err(Error::Config("[evolve] snapshot_every must be at least 1".into()));
        }
        if self.solve.max_iters == 0 || self.solve.restarts == 0 || !(self.solve.tol_grad > 0.0) {
            return Err(Error::Config(
                "[solve] needs max_iters ≥ 1, restarts ≥ 1, tol_grad > 0".into(),
            ));
        }
        for i in 0..3 {
            if !(self.data.width[i] > 0.0) {
                return Err(Error::Config(format!(
                    "[data] width_{} must be positive",
                    ["u", "v", "w"][i]
                )));
            }
            if self.data.center[i].len() != self.grid.dim || self.data.wave[i].len() != self.grid.dim
            {
                return Err(Error::Config(format!(
                    "[data] center_{c}/wave_{c} must have {} component(s)",
                    self.grid.dim,
                    c = ["u", "v", "w"][i]
                )));
            }
        }
        if self.scan.axis >= self.grid.dim {
            return Err(Error::Config(format!(
                "[scan] axis {} out of range for dim {}",
                self.scan.axis, self.grid.dim
            )));
        }
        for &cv in &self.scan.c_values {
            let mut c = vec![0.0; self.grid.dim];
            c[self.scan.axis] = cv;
            dressing_indices(&grid, [p.gamma1, p.gamma2, p.gamma3], &c)
                .map_err(|e| Error::Config(format!("[scan] c_values entry {cv}: {e}")))?;
        }
        Ok(())
    }

    /// Canonical text form; parsing it back reproduces `self`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let g = &self.grid;
        out.push_str(&format!(
            "[grid]\ndim = {}\nn = {}\nhalf_width = {}\n\n",
            g.dim, g.n, g.half_width
        ));
        let p = &self.params;
        out.push_str(&format!(
            "[params]\ngamma1 = {}\ngamma2 = {}\ngamma3 = {}\nomega = {}\nc = {}\n\n",
            p.gamma1,
            p.gamma2,
            p.gamma3,
            p.omega,
            fmt_list(&p.c)
        ));
        let s = &self.solve;
        out.push_str(&format!(
            "[solve]\nmax_iters = {}\nstep_size = {}\ntol_grad = {}\nrestarts = {}\nseed = {}\n\n",
            s.max_iters, s.step_size, s.tol_grad, s.restarts, s.seed
        ));
        let e = &self.evolve;
        out.push_str(&format!(
            "[evolve]\ndt = {}\nt_final = {}\nsnapshot_every = {}\nblowup_factor = {}\n\n",
            e.dt, e.t_final, e.snapshot_every, e.blowup_factor
        ));
        let d = &self.data;
        out.push_str(&format!(
            "[data]\nkind = {}\n",
            match d.kind {
                DataKind::Gaussian => "gaussian",
                DataKind::Random => "random",
            }
        ));
        for (i, comp) in ["u", "v", "w"].iter().enumerate() {
            out.push_str(&format!(
                "amp_{comp} = {}\nwidth_{comp} = {}\ncenter_{comp} = {}\nwave_{comp} = {}\n",
                d.amp[i],
                d.width[i],
                fmt_list(&d.center[i]),
                fmt_list(&d.wave[i])
            ));
        }
        out.push_str(&format!("seed = {}\nmax_mode = {}\n\n", d.seed, d.max_mode));
        let sc = &self.scan;
        out.push_str(&format!(
            "[scan]\nc_values = {}\naxis = {}\n",
            fmt_list(&sc.c_values),
            sc.axis
        ));
        out
    }

    pub fn build_grid(&self) -> Result<Arc<Grid>> {
        make_grid(self.grid.dim, self.grid.n, self.grid.half_width)
    }

    pub fn build_params(&self) -> Result<Params> {
        Params::new(
            self.params.gamma1,
            self.params.gamma2,
            self.params.gamma3,
            self.params.omega,
            self.params.c.clone(),
        )
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            max_iters: self.solve.max_iters,
            step_size: self.solve.step_size,
            tol_grad: self.solve.tol_grad,
            restarts: self.solve.restarts,
            seed: self.solve.seed,
        }
    }

    pub fn evolve_config(&self) -> EvolveConfig {
        EvolveConfig {
            dt: self.evolve.dt,
            t_final: self.evolve.t_final,
            snapshot_every: self.evolve.snapshot_every,
            blowup_factor: self.evolve.blowup_factor,
        }
    }

    pub fn build_data(&self, grid: &Arc<Grid>) -> Result<TriField> {
        let d = &self.data;
        match d.kind {
            DataKind::Gaussian => {
                let mk = |i: usize| {
                    gaussian(
                        grid,
                        Complex64::new(d.amp[i], 0.0),
                        &d.center[i],
                        d.width[i],
                        &d.wave[i],
                    )
                };
                TriField::new(mk(0), mk(1), mk(2))
            }
            DataKind::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(d.seed);
                TriField::new(
                    band_limited(grid, &mut rng, d.max_mode, d.amp[0]),
                    band_limited(grid, &mut rng, d.max_mode, d.amp[1]),
                    band_limited(grid, &mut rng, d.max_mode, d.amp[2]),
                )
            }
        }
    }

    pub fn scan_velocities(&self) -> Vec<Vec<f64>> {
        self.scan
            .c_values
            .iter()
            .map(|&cv| {
                let mut c = vec![0.0; self.grid.dim];
                c[self.scan.axis] = cv;
                c
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        let text = cfg.serialize();
        let parsed = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn partial_config_gets_defaults() {
        // shrinking the grid requires shrinking the scan velocities too:
        // commensurability is validated at parse time
        let cfg = RunConfig::parse("[grid]\nn = 128\n[scan]\nc_values = 2,4\n").unwrap();
        assert_eq!(cfg.grid.n, 128);
        assert_eq!(cfg.grid.dim, 1);
        assert_eq!(cfg.solve.restarts, 5);
        // round trip of a modified config
        let text = cfg.serialize();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
        // scan velocities beyond the resolvable lattice are a parse error
        let err = RunConfig::parse("[grid]\nn = 64\n").unwrap_err();
        assert!(err.to_string().contains("c_values"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let cfg = RunConfig::parse(
            "# top comment\n[params]\ngamma3 = 3.0  # non-resonant\n\n[scan]\nc_values = 2\n[grid]\nn = 64\n",
        )
        .unwrap();
        assert_eq!(cfg.params.gamma3, 3.0);
        assert_eq!(cfg.grid.n, 64);
    }

    #[test]
    fn field_level_errors() {
        let err = RunConfig::parse("[params]\ngamma1 = -1\n").unwrap_err();
        assert!(err.to_string().contains("gamma1"), "{err}");
        let err = RunConfig::parse("[evolve]\ndt = 0\n").unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
        let err = RunConfig::parse("[grid]\nn = 7\n").unwrap_err();
        assert!(err.to_string().contains("grid"), "{err}");
        let err = RunConfig::parse("[bogus]\nx = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = RunConfig::parse("[params]\ngamma1 = oops\n").unwrap_err();
        assert!(err.to_string().contains("cannot parse"), "{err}");
    }

    #[test]
    fn incommensurate_velocity_rejected_at_parse_time() {
        // default grid has L = 4π, so c = 0.3 is off-lattice
        let err = RunConfig::parse("[params]\nc = 0.3\n").unwrap_err();
        assert!(err.to_string().contains("c"), "{err}");
        // and a commensurate one passes
        let cfg = RunConfig::parse("[params]\nc = 0.5\ngamma3 = 3.0\n").unwrap();
        assert_eq!(cfg.params.c, vec![0.5]);
    }

    #[test]
    fn data_builders_work() {
        let cfg = RunConfig::parse("[data]\nkind = random\nseed = 9\n").unwrap();
        let grid = cfg.build_grid().unwrap();
        let tri = cfg.build_data(&grid).unwrap();
        assert!(tri.is_finite());
        let cfg = RunConfig::parse("[data]\nwave_u = 8\n").unwrap();
        let tri = cfg.build_data(&cfg.build_grid().unwrap()).unwrap();
        assert!(tri.norm_sq() > 0.0);
    }
}
