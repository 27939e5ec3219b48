//! Flag value grammar: `key=value` tokens, `lo:hi:n` grids, `lo:hi`
//! intervals and comma-separated lists.

use freeconv::freeid::{uniform_grid, StableParams};
use freeconv::measures::parse_node_list;
use freeconv::{DiscreteMeasure, FreeError, FreeIdLaw, GeneratingPair, PhiSpec, WeightedNodeSet};
use num_complex::Complex64;

use crate::args::LawArgs;

fn bad(msg: impl Into<String>) -> FreeError {
    FreeError::Parse(msg.into())
}

pub fn real(text: &str) -> Result<f64, FreeError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| bad(format!("not a number: {text:?}")))?;
    if !v.is_finite() {
        return Err(bad(format!("not finite: {text:?}")));
    }
    Ok(v)
}

fn key_values<'a>(tokens: &'a [String], keys: &[&str]) -> Result<Vec<&'a str>, FreeError> {
    let mut found: Vec<Option<&str>> = vec![None; keys.len()];
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got {token:?}")))?;
        let slot = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| bad(format!("unknown key {key:?}")))?;
        if found[slot].replace(value).is_some() {
            return Err(bad(format!("duplicate key {key:?}")));
        }
    }
    keys.iter()
        .zip(found)
        .map(|(k, v)| v.ok_or_else(|| bad(format!("missing {k}="))))
        .collect()
}

pub fn pair(tokens: &[String]) -> Result<GeneratingPair, FreeError> {
    let values = key_values(tokens, &["gamma", "sigma"])?;
    let gamma = real(values[0])?;
    if values[1].trim().is_empty() {
        return Err(bad("sigma needs at least one node"));
    }
    let nodes = parse_node_list(values[1])?;
    Ok(GeneratingPair::new(gamma, WeightedNodeSet::new(&nodes)?))
}

pub fn stable(tokens: &[String]) -> Result<StableParams, FreeError> {
    let values = key_values(tokens, &["alpha", "b"])?;
    let alpha = real(values[0])?;
    match values[1].split_once(':') {
        Some((m, theta)) => StableParams::polar(alpha, real(m)?, real(theta)?),
        None => StableParams::new(alpha, Complex64::new(real(values[1])?, 0.0)),
    }
}

pub fn law(args: &LawArgs) -> Result<FreeIdLaw, FreeError> {
    match (&args.pair, &args.stable) {
        (Some(p), None) => Ok(FreeIdLaw::from_pair(pair(p)?)),
        (None, Some(s)) => Ok(FreeIdLaw::new(PhiSpec::Stable(stable(s)?))),
        _ => Err(bad("give exactly one of --pair and --stable")),
    }
}

pub fn measure(text: &str) -> Result<DiscreteMeasure, FreeError> {
    if text.trim().is_empty() {
        return Err(bad("empty atom list"));
    }
    DiscreteMeasure::new(&parse_node_list(text)?)
}

pub fn grid(text: &str) -> Result<Vec<f64>, FreeError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad(format!("grid must be lo:hi:n, got {text:?}")));
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| bad(format!("grid size must be an integer, got {n:?}")))?;
    uniform_grid(real(lo)?, real(hi)?, n)
}

pub fn interval(text: &str) -> Result<(f64, f64), FreeError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| bad(format!("interval must be lo:hi, got {text:?}")))?;
    let (lo, hi) = (real(lo)?, real(hi)?);
    if !(lo < hi) {
        return Err(bad(format!("empty interval {text:?}")));
    }
    Ok((lo, hi))
}

pub fn list<T, F>(text: &str, item: F) -> Result<Vec<T>, FreeError>
where
    F: Fn(&str) -> Result<T, FreeError>,
{
    let items = text.split(',').map(|s| item(s.trim())).collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(bad("empty list"));
    }
    Ok(items)
}

pub fn count(text: &str) -> Result<usize, FreeError> {
    text.parse()
        .map_err(|_| bad(format!("expected a positive integer, got {text:?}")))
        .and_then(|n: usize| if n > 0 { Ok(n) } else { Err(bad("row index must be positive")) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pair_tokens() {
        let p = pair(&tokens(&["gamma=0.25", "sigma=1:0.25"])).unwrap();
        assert_eq!(p.gamma, 0.25);
        assert_eq!(p.sigma.nodes(), &[(1.0, 0.25)]);
        let p = pair(&tokens(&["sigma=-1:0.5,1:0.5", "gamma=-2"])).unwrap();
        assert_eq!(p.gamma, -2.0);
        assert!(pair(&tokens(&["gamma=0", "sigma="])).is_err());
        assert!(pair(&tokens(&["gamma=0"])).is_err());
        assert!(pair(&tokens(&["gamma=x", "sigma=0:1"])).is_err());
        assert!(pair(&tokens(&["gamma=0", "gamma=1"])).is_err());
    }

    #[test]
    fn stable_tokens() {
        let s = stable(&tokens(&["alpha=1", "b=0.5"])).unwrap();
        assert_eq!(s.b(), Complex64::new(0.5, 0.0));
        let s = stable(&tokens(&["alpha=1.5", "b=1:-0.7853981633974483"])).unwrap();
        assert!((s.b().arg() + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(
            stable(&tokens(&["alpha=1.5", "b=1:0.78"])).unwrap_err().name(),
            "InvalidStableParameters"
        );
    }

    #[test]
    fn grids_and_intervals() {
        let g = grid("-2:2:5").unwrap();
        assert_eq!(g, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(grid("-2:2").is_err());
        assert!(grid("2:-2:5").is_err());
        assert!(grid("-2:2:1").is_err());
        assert_eq!(interval("-0.1:0.1").unwrap(), (-0.1, 0.1));
        assert!(interval("0.1:-0.1").is_err());
        assert_eq!(list("8,32,128", count).unwrap(), vec![8, 32, 128]);
        assert!(list("8,,3", count).is_err());
        assert!(real("nan").is_err());
    }
}
