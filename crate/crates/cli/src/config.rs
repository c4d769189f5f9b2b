//! Run settings from flags and from `key = value` files. Flags win.

use std::path::{Path, PathBuf};

use clap::Args;

use crate::CliError;

#[derive(Args, Clone, Debug, Default)]
pub struct Settings {
    /// Builtin model name (`bst`, `d_ary:3`, ...) or path to a model file.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of steps; scientific notation such as `1e6` is accepted.
    #[arg(long, value_parser = parse_count)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `default`, `final`, `geometric:N0:GAMMA` or `list:N1,N2,...`.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub replicates: Option<u64>,
    /// Comma-separated tilts.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Option<Vec<f64>>,
    /// Expansion order.
    #[arg(long)]
    pub r: Option<usize>,
    /// Output directory or file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Integer pmf `k:p,k:p,...` for the classical harness.
    #[arg(long, allow_hyphen_values = true)]
    pub pmf: Option<String>,
    /// Comma-separated sample sizes for the classical harness.
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub n_list: Option<Vec<u64>>,
    /// Gaussian offset of the occupation levels.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Fixed offset of the occupation levels.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i64>,
    /// Growth exponent of `c_n` for occupation case (b).
    #[arg(long)]
    pub exponent: Option<f64>,
    /// Sign of `c_n` for occupation case (b).
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<f64>,
    /// Tilt interval `lo,hi` of the saddle harness.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub interval: Option<Vec<f64>>,
    /// Smallest snapshot used by the mode and width harnesses.
    #[arg(long, value_parser = parse_count)]
    pub n_min: Option<u64>,
    /// Number of random cumulants to estimate.
    #[arg(long)]
    pub order: Option<usize>,
}

const KEYS: [&str; 17] = [
    "model", "n", "seed", "schedule", "replicates", "beta", "r", "out", "pmf", "n_list", "alpha", "a",
    "exponent", "sign", "interval", "n_min", "order",
];

pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("not a non-negative integer: {s}"))
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t}")))
        .collect()
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',').map(|t| parse_count(t.trim())).collect()
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("invalid value for {key}: {v}"))
}

impl Settings {
    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "model" => self.model = Some(v.to_string()),
            "n" => self.n = Some(parse_count(v)?),
            "seed" => self.seed = Some(parse(key, v)?),
            "schedule" => self.schedule = Some(v.to_string()),
            "replicates" => self.replicates = Some(parse(key, v)?),
            "beta" => self.beta = Some(parse_f64_list(v)?),
            "r" => self.r = Some(parse(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "pmf" => self.pmf = Some(v.to_string()),
            "n_list" => self.n_list = Some(parse_u64_list(v)?),
            "alpha" => self.alpha = Some(parse(key, v)?),
            "a" => self.a = Some(parse(key, v)?),
            "exponent" => self.exponent = Some(parse(key, v)?),
            "sign" => self.sign = Some(parse(key, v)?),
            "interval" => self.interval = Some(parse_f64_list(v)?),
            "n_min" => self.n_min = Some(parse_count(v)?),
            "order" => self.order = Some(parse(key, v)?),
            _ => return Err(format!("unknown key {key}; known keys: {}", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Flat `key = value` lines with `#` comments.
    pub fn parse_file(text: &str) -> Result<Self, String> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            out.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Values from `self`, falling back to `file`.
    pub fn over(self, file: Settings) -> Settings {
        Settings {
            model: self.model.or(file.model),
            n: self.n.or(file.n),
            seed: self.seed.or(file.seed),
            schedule: self.schedule.or(file.schedule),
            replicates: self.replicates.or(file.replicates),
            beta: self.beta.or(file.beta),
            r: self.r.or(file.r),
            out: self.out.or(file.out),
            pmf: self.pmf.or(file.pmf),
            n_list: self.n_list.or(file.n_list),
            alpha: self.alpha.or(file.alpha),
            a: self.a.or(file.a),
            exponent: self.exponent.or(file.exponent),
            sign: self.sign.or(file.sign),
            interval: self.interval.or(file.interval),
            n_min: self.n_min.or(file.n_min),
            order: self.order.or(file.order),
        }
    }

    pub fn model_name(&self) -> Result<&str, CliError> {
        self.model.as_deref().ok_or_else(|| CliError::Usage("missing --model".into()))
    }

    pub fn single_beta(&self, default: f64) -> Result<f64, CliError> {
        match self.beta.as_deref() {
            None => Ok(default),
            Some([b]) => Ok(*b),
            Some(_) => Err(CliError::Usage("expected a single --beta".into())),
        }
    }

    pub fn schedule_for(&self, n: u64) -> Result<Vec<u64>, CliError> {
        use edgeworth::simulator::{default_schedule, geometric_schedule};
        let spec = self.schedule.as_deref().unwrap_or("default");
        let bad = || CliError::Usage(format!("invalid schedule {spec}"));
        let mut steps = match spec.split_once(':') {
            None if spec == "default" => default_schedule(n),
            None if spec == "final" => Vec::new(),
            Some(("geometric", rest)) => {
                let (n0, g) = rest.split_once(':').ok_or_else(bad)?;
                let n0: f64 = n0.parse().map_err(|_| bad())?;
                let g: f64 = g.parse().map_err(|_| bad())?;
                if !(n0 >= 1.0 && g > 1.0) {
                    return Err(bad());
                }
                geometric_schedule(n0, g, n)
            }
            Some(("list", rest)) => {
                let mut v = parse_u64_list(rest).map_err(CliError::Usage)?;
                v.retain(|&s| s <= n);
                v
            }
            _ => return Err(bad()),
        };
        if steps.last() != Some(&n) {
            steps.push(n);
        }
        steps.sort_unstable();
        steps.dedup();
        Ok(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_precedence() {
        let file = Settings::parse_file("# run\nmodel = rrt\nn = 1e4 # steps\nbeta = -0.5,0.3\n").unwrap();
        assert_eq!(file.n, Some(10_000));
        assert_eq!(file.beta, Some(vec![-0.5, 0.3]));
        let flags = Settings { model: Some("bst".into()), ..Settings::default() };
        let merged = flags.over(file);
        assert_eq!(merged.model.as_deref(), Some("bst"));
        assert_eq!(merged.n, Some(10_000));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Settings::parse_file("colour = blue").unwrap_err().contains("unknown key"));
        assert!(Settings::parse_file("n = 1.5").is_err());
        assert!(Settings::parse_file("model").is_err());
    }

    #[test]
    fn schedules() {
        let s = Settings { schedule: Some("list:10,50,500".into()), ..Settings::default() };
        assert_eq!(s.schedule_for(100).unwrap(), vec![10, 50, 100]);
        let s = Settings { schedule: Some("final".into()), ..Settings::default() };
        assert_eq!(s.schedule_for(100).unwrap(), vec![100]);
        assert_eq!(Settings::default().schedule_for(5000).unwrap(), vec![1000, 1779, 3163, 5000]);
        let s = Settings { schedule: Some("geometric:1:0.5".into()), ..Settings::default() };
        assert!(s.schedule_for(100).is_err());
    }
}
