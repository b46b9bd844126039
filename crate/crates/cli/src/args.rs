//! Parsers for grids, width functions and `key=value` lists.

use std::path::Path;

use heunent::bspline::SigmaSpec;
use heunent::exactalg::{int, parse_rational, Rational};
use heunent::identities::Params;

/// `a:b:count`, endpoints included.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, count] = parts[..] else {
        return Err(format!("grid `{s}` is not of the form a:b:count"));
    };
    let a = parse_rational(a).map_err(|e| e.to_string())?;
    let b = parse_rational(b).map_err(|e| e.to_string())?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("grid count `{count}` is not a positive integer"))?;
    match count {
        0 => Err("grid count must be at least 1".into()),
        1 if a != b => Err("a one-point grid needs a = b".into()),
        1 => Ok(vec![a]),
        _ => {
            let h = (&b - &a) / int(count as i64 - 1);
            Ok((0..count).map(|i| &a + &h * int(i as i64)).collect())
        }
    }
}

/// `const:c`, `quad:c:d` (`σ(x) = c + d x²`) or `table:file.csv`.
pub fn parse_sigma(s: &str) -> Result<SigmaSpec, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("bad sigma spec `{s}`"))?;
    let rat = |v: &str| parse_rational(v).map_err(|e| e.to_string());
    match kind {
        "const" => Ok(SigmaSpec::Constant(rat(rest)?)),
        "quad" => {
            let (c, d) = rest
                .split_once(':')
                .ok_or_else(|| format!("quad sigma needs quad:c:d, got `{s}`"))?;
            Ok(SigmaSpec::Quadratic {
                c: rat(c)?,
                d: rat(d)?,
            })
        }
        "table" => read_sigma_table(Path::new(rest)),
        _ => Err(format!(
            "unknown sigma kind `{kind}` (expected const, quad or table)"
        )),
    }
}

/// Two columns `x,sigma`; a non-numeric first row is taken as a header.
fn read_sigma_table(path: &Path) -> Result<SigmaSpec, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        if rec.len() != 2 {
            return Err(format!(
                "{}: row {} needs 2 columns",
                path.display(),
                line + 1
            ));
        }
        match (parse_rational(&rec[0]), parse_rational(&rec[1])) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ if line == 0 => {}
            _ => {
                return Err(format!(
                    "{}: row {} is not numeric",
                    path.display(),
                    line + 1
                ))
            }
        }
    }
    SigmaSpec::table(xs, ys).map_err(|e| e.to_string())
}

pub fn parse_params(items: &[String]) -> Result<Params, String> {
    Params::parse(&items.join(",")).map_err(|e| e.to_string())
}

/// Rejects keys outside `allowed`.
pub fn check_keys(params: &Params, allowed: &[&str], what: &str) -> Result<(), String> {
    match params.iter().find(|(k, _)| !allowed.contains(k)) {
        Some((k, _)) => Err(format!(
            "unknown parameter `{k}` for {what} (expected {})",
            allowed.join(", ")
        )),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heunent::exactalg::rat;

    #[test]
    fn grid_endpoints_included() {
        let g = parse_grid("0:1:5").unwrap();
        assert_eq!(g, vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
        assert_eq!(parse_grid("1/3:1/3:1").unwrap(), vec![rat(1, 3)]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:1").is_err());
    }

    #[test]
    fn sigma_forms() {
        assert_eq!(
            parse_sigma("const:1/2").unwrap(),
            SigmaSpec::Constant(rat(1, 2))
        );
        assert_eq!(
            parse_sigma("quad:1:1").unwrap(),
            SigmaSpec::Quadratic {
                c: int(1),
                d: int(1)
            }
        );
        assert!(parse_sigma("cubic:1").is_err());
        assert!(parse_sigma("table:/nonexistent.csv").is_err());
    }

    #[test]
    fn sigma_table_file() {
        let dir = std::env::temp_dir().join(format!("heunent-sigma-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.csv");
        std::fs::write(&path, "x,sigma\n0,1\n1,1/2\n").unwrap();
        let s = parse_sigma(&format!("table:{}", path.display())).unwrap();
        assert_eq!(s.eval(&rat(1, 2)).unwrap(), rat(3, 4));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
