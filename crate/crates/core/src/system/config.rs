//! Flat `key = value` run configuration. Rationals are read exactly, `#`
//! starts a comment, unknown keys are rejected.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exponents::rational::to_f64;
use crate::exponents::{fmt_rational, parse_rational, ExponentProfile, ExtRational, Rational};
use crate::poisson::DatumSpec;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A value with the position it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
    pub column: usize,
}

/// Parse `key = value` lines; duplicate keys are an error.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, Entry>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let column = body.len() - body.trim_start().len() + 1;
            return Err(ConfigError { line, column, message: "expected `key = value`".into() });
        };
        let key = body[..eq].trim();
        let value = body[eq + 1..].trim();
        let vcol = eq + 2 + (body[eq + 1..].len() - body[eq + 1..].trim_start().len());
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ConfigError { line, column: 1, message: format!("invalid key `{key}`") });
        }
        if value.is_empty() {
            return Err(ConfigError { line, column: vcol, message: format!("missing value for `{key}`") });
        }
        let entry = Entry { value: value.to_string(), line, column: vcol };
        if out.insert(key.to_string(), entry).is_some() {
            return Err(ConfigError { line, column: 1, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(out)
}

/// Everything a system run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub profile: ExponentProfile,
    pub lambda: f64,
    pub mu: f64,
    pub f: DatumSpec,
    pub g: DatumSpec,
    /// `H`-norm exponent; `None` picks the default inside `(qm, σ̂)`.
    pub r: Option<f64>,
    pub damping: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// Blow-up cap as a multiple of the monitored norm of `T(0)`.
    pub blowup_factor: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub grading: f64,
    /// Fixed `C̃`; calibrated when absent.
    pub c_tilde: Option<f64>,
}

const KEYS: [&str; 20] = [
    "s1", "s2", "p", "q", "N", "m", "sigma", "lambda", "mu", "f", "g", "r", "damping", "max_iters", "tol", "blowup_factor", "n_radial",
    "n_angular", "grading", "c_tilde",
];

impl SystemConfig {
    pub fn s1(&self) -> f64 {
        to_f64(&self.profile.s1)
    }

    pub fn s2(&self) -> f64 {
        to_f64(&self.profile.s2)
    }

    pub fn p(&self) -> f64 {
        to_f64(&self.profile.p)
    }

    pub fn q(&self) -> f64 {
        to_f64(&self.profile.q)
    }

    pub fn r(&self) -> f64 {
        self.r.unwrap_or_else(|| super::default_r(&self.profile))
    }

    /// Defaults for everything but the profile, `λ` and `μ`.
    pub fn new(profile: ExponentProfile, lambda: f64, mu: f64) -> Self {
        SystemConfig {
            profile,
            lambda,
            mu,
            f: DatumSpec::Const(1.0),
            g: DatumSpec::Const(1.0),
            r: None,
            damping: 0.5,
            max_iters: 200,
            tol: 1e-8,
            blowup_factor: 1e6,
            n_radial: 24,
            n_angular: 48,
            grading: 2.0,
            c_tilde: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_entries(&parse_key_values(text)?)
    }

    pub fn from_entries(map: &BTreeMap<String, Entry>) -> Result<Self, ConfigError> {
        for (k, e) in map {
            if !KEYS.contains(&k.as_str()) {
                return Err(ConfigError { line: e.line, column: 1, message: format!("unknown key `{k}`") });
            }
        }
        let missing = |k: &str| ConfigError { line: 0, column: 0, message: format!("missing required key `{k}`") };
        let bad = |e: &Entry, msg: String| ConfigError { line: e.line, column: e.column, message: msg };
        let get = |k: &str| map.get(k).ok_or_else(|| missing(k));
        let rational = |k: &str| -> Result<Rational, ConfigError> {
            let e = get(k)?;
            parse_rational(&e.value).map_err(|err| bad(e, err.to_string()))
        };
        let ext = |k: &str| -> Result<ExtRational, ConfigError> {
            let e = get(k)?;
            ExtRational::parse(&e.value).map_err(|err| bad(e, err.to_string()))
        };
        let real = |k: &str| -> Result<Option<f64>, ConfigError> {
            map.get(k)
                .map(|e| e.value.parse::<f64>().map_err(|_| bad(e, format!("`{}` is not a number", e.value))))
                .transpose()
        };
        let count = |k: &str| -> Result<Option<usize>, ConfigError> {
            map.get(k)
                .map(|e| e.value.parse::<usize>().map_err(|_| bad(e, format!("`{}` is not a nonnegative integer", e.value))))
                .transpose()
        };
        let datum = |k: &str| -> Result<Option<DatumSpec>, ConfigError> {
            map.get(k).map(|e| e.value.parse::<DatumSpec>().map_err(|err| bad(e, err.to_string()))).transpose()
        };
        let (s1, s2, p, q) = (rational("s1")?, rational("s2")?, rational("p")?, rational("q")?);
        let (m, sigma) = (ext("m")?, ext("sigma")?);
        let n_entry = get("N")?;
        let n: u32 = n_entry.value.parse().map_err(|_| bad(n_entry, "N must be an integer".into()))?;
        let profile = ExponentProfile::new(s1, s2, p, q, n, m, sigma)
            .map_err(|err| bad(get("s1").unwrap_or(n_entry), err.to_string()))?;
        profile.require_fractional().map_err(|err| bad(get("s2").unwrap_or(n_entry), err.to_string()))?;
        let lambda = real("lambda")?.ok_or_else(|| missing("lambda"))?;
        let mu = real("mu")?.ok_or_else(|| missing("mu"))?;
        let mut c = SystemConfig::new(profile, lambda, mu);
        if let Some(f) = datum("f")? {
            c.f = f;
        }
        if let Some(g) = datum("g")? {
            c.g = g;
        }
        c.r = real("r")?;
        c.damping = real("damping")?.unwrap_or(c.damping);
        c.max_iters = count("max_iters")?.unwrap_or(c.max_iters);
        c.tol = real("tol")?.unwrap_or(c.tol);
        c.blowup_factor = real("blowup_factor")?.unwrap_or(c.blowup_factor);
        c.n_radial = count("n_radial")?.unwrap_or(c.n_radial);
        c.n_angular = count("n_angular")?.unwrap_or(c.n_angular);
        c.grading = real("grading")?.unwrap_or(c.grading);
        c.c_tilde = real("c_tilde")?;
        c.validate().map_err(|message| ConfigError { line: 0, column: 0, message })?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.lambda >= 0.0 && self.mu >= 0.0 && self.lambda.is_finite() && self.mu.is_finite()) {
            return Err("lambda and mu must be finite and nonnegative".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(format!("damping {} outside (0, 1]", self.damping));
        }
        if self.max_iters == 0 || !(self.tol > 0.0) || !(self.blowup_factor > 1.0) {
            return Err("max_iters, tol and blowup_factor must be positive (blowup_factor > 1)".into());
        }
        if let Some(c) = self.c_tilde {
            if !(c > 0.0) {
                return Err("c_tilde must be positive".into());
            }
        }
        if let Some(r) = self.r {
            let qm = self.q() * self.profile.m.to_f64();
            let hi = crate::exponents::derive(&self.profile).sigma_hat_s1s2_p.to_f64();
            if !(r >= 1.0) || (qm < hi && !(r > qm && r < hi)) {
                return Err(format!("r = {r} must lie in (qm, sigma_hat) = ({qm}, {hi})"));
            }
        }
        Ok(())
    }

    /// Round-trippable text form.
    pub fn to_text(&self) -> String {
        let pr = &self.profile;
        let mut out = format!(
            "s1 = {}\ns2 = {}\np = {}\nq = {}\nN = {}\nm = {}\nsigma = {}\nlambda = {:e}\nmu = {:e}\nf = {}\ng = {}\n",
            fmt_rational(&pr.s1),
            fmt_rational(&pr.s2),
            fmt_rational(&pr.p),
            fmt_rational(&pr.q),
            pr.n,
            pr.m,
            pr.sigma,
            self.lambda,
            self.mu,
            datum_text(&self.f),
            datum_text(&self.g)
        );
        if let Some(r) = self.r {
            out.push_str(&format!("r = {r}\n"));
        }
        out.push_str(&format!(
            "damping = {}\nmax_iters = {}\ntol = {:e}\nblowup_factor = {:e}\nn_radial = {}\nn_angular = {}\ngrading = {}\n",
            self.damping, self.max_iters, self.tol, self.blowup_factor, self.n_radial, self.n_angular, self.grading
        ));
        if let Some(c) = self.c_tilde {
            out.push_str(&format!("c_tilde = {c:e}\n"));
        }
        out
    }
}

pub fn datum_text(d: &DatumSpec) -> String {
    match d {
        DatumSpec::Const(c) => format!("const:{c}"),
        DatumSpec::Singular { m, eps } => format!("singular:{m},{eps}"),
        DatumSpec::File(p) => format!("file:{}", p.display()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "s1 = 3/4\ns2 = 9/10\np = 21/20\nq = 3/2\nN = 2\nm = 2\nsigma = 2\nlambda = 0.01\nmu = 0.01\n";

    #[test]
    fn round_trip() {
        let c = SystemConfig::parse(&format!("{BASE}f = singular:2,0.5 # comment\nr = 5\n")).unwrap();
        assert_eq!(c.f, DatumSpec::Singular { m: 2.0, eps: 0.5 });
        let again = SystemConfig::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = SystemConfig::parse(&format!("{BASE}colour = red\n")).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(e.message.contains("unknown key"));
        let e = SystemConfig::parse("s1 = 3/x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse_key_values("a = 1\n  oops\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(SystemConfig::parse(&format!("{BASE}r = 1.5\n")).is_err());
    }
}
