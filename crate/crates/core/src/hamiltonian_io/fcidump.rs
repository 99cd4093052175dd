//! Knowles-Handy FCIDUMP reader and writer.
//!
//! The `&FCI ... &END` namelist must provide `NORB`, `NELEC` and `MS2`;
//! `ORBSYM`, `ISYM` and any other keys are accepted and ignored. Orbital
//! indices are 1-based in the file and 0-based in memory. Records are
//! `value i j k l`:
//!
//! * all four indices positive: `(ij|kl)`, expanded to its eight images
//! * `k = l = 0`: one-body `h_ij`
//! * all zero: core (nuclear repulsion) energy
//! * only `i` positive: orbital energy, ignored

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::MolecularIntegrals;
use crate::error::{Error, Result};

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<MolecularIntegrals> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_fcidump(&text)
}

pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.trim_start().to_ascii_uppercase().starts_with("&FCI"))
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing &FCI namelist header".into(),
        })?;
    let mut header = String::new();
    let mut end = None;
    for (k, line) in lines.iter().enumerate().skip(start) {
        let upper = line.trim().to_ascii_uppercase();
        let body = if k == start {
            upper.trim_start_matches("&FCI").to_string()
        } else {
            upper.clone()
        };
        if let Some(pos) = body.find("&END").or_else(|| {
            let t = body.trim();
            (t == "/" || t.ends_with('/')).then(|| body.rfind('/').unwrap())
        }) {
            header.push_str(&body[..pos]);
            end = Some(k);
            break;
        }
        header.push_str(&body);
        header.push(' ');
    }
    let end = end.ok_or_else(|| Error::Parse {
        line: start + 1,
        message: "unterminated &FCI namelist (no &END or /)".into(),
    })?;
    let fields = parse_namelist(&header);
    let header_line = start + 1;
    let get = |key: &str| -> Result<i64> {
        let raw = fields.get(key).ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!("header is missing {key}"),
        })?;
        let first = raw.first().ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!("{key} has no value"),
        })?;
        first.parse::<i64>().map_err(|_| Error::Parse {
            line: header_line,
            message: format!("{key} value {first:?} is not an integer"),
        })
    };
    let norb = get("NORB")?;
    let nelec = get("NELEC")?;
    let ms2 = get("MS2")?;
    if norb < 1 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("NORB must be positive, got {norb}"),
        });
    }
    if nelec < 0 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("NELEC must be non-negative, got {nelec}"),
        });
    }
    let n = norb as usize;
    let mut mol = MolecularIntegrals::zeros(n, nelec as usize, ms2 as i32)?;

    for (k, line) in lines.iter().enumerate().skip(end + 1) {
        let lineno = k + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `value i j k l`, found {} fields", toks.len()),
            });
        }
        let value = parse_real(toks[0]).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("value {:?} is not a number", toks[0]),
        })?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let v: i64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("index {tok:?} is not an integer"),
            })?;
            if v < 0 || v > norb {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("orbital index {v} outside 0..={norb}"),
                });
            }
            *slot = v as usize;
        }
        match idx {
            [0, 0, 0, 0] => mol.set_core_energy(value),
            [i, j, 0, 0] if i > 0 && j > 0 => mol.set_one_body_sym(i - 1, j - 1, value),
            [i, 0, 0, 0] if i > 0 => {}
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                mol.set_two_body_sym(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unsupported index pattern {idx:?}"),
                })
            }
        }
    }
    Ok(mol)
}

fn parse_real(tok: &str) -> Option<f64> {
    // Fortran writers sometimes emit D exponents.
    tok.replace(['D', 'd'], "e").parse().ok()
}

fn parse_namelist(body: &str) -> HashMap<String, Vec<String>> {
    let spaced = body.replace('=', " = ").replace(',', " ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    let mut key: Option<String> = None;
    let mut k = 0;
    while k < toks.len() {
        if k + 1 < toks.len() && toks[k + 1] == "=" {
            key = Some(toks[k].to_string());
            out.entry(toks[k].to_string()).or_default();
            k += 2;
            continue;
        }
        if let Some(key) = &key {
            out.get_mut(key).unwrap().push(toks[k].to_string());
        }
        k += 1;
    }
    out
}

/// Writes the unique records (`i ≥ j`, `k ≥ l`, `ij ≥ kl`) with non-zero
/// values using shortest round-trip float formatting.
pub fn serialize_fcidump(mol: &MolecularIntegrals) -> String {
    let n = mol.n_orbitals();
    let mut out = String::new();
    let _ = writeln!(
        out,
        " &FCI NORB={},NELEC={},MS2={},",
        n,
        mol.n_electrons(),
        mol.ms2()
    );
    let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, " &END");
    for i in 0..n {
        for j in 0..=i {
            let ij = i * (i + 1) / 2 + j;
            for k in 0..n {
                for l in 0..=k {
                    if k * (k + 1) / 2 + l > ij {
                        continue;
                    }
                    let v = mol.two_body(i, j, k, l);
                    if v != 0.0 {
                        let _ = writeln!(out, "{:e} {} {} {} {}", v, i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = mol.one_body(i, j);
            if v != 0.0 {
                let _ = writeln!(out, "{:e} {} {} 0 0", v, i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(out, "{:e} 0 0 0 0", mol.core_energy());
    out
}
