//! FCIDUMP reader/writer (Molpro text convention).
//!
//! Header `&FCI NORB=…,NELEC=…,MS2=…` terminated by `&END` or `/`; body
//! lines `value i j k l` with 1-based indices. All-zero indices carry the
//! core constant, `k = l = 0` a one-electron integral `h_ij`, anything else
//! a two-electron integral `(ij|kl)` in chemists' notation with real-orbital
//! 8-fold symmetry.

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct FcidumpData {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i64,
    /// Core (frozen + nuclear) constant.
    pub core: f64,
    /// Symmetric one-electron integrals, row-major `n_orb × n_orb`.
    h1: Vec<f64>,
    /// Fully expanded two-electron integrals `(pq|rs)`, index
    /// `((p·n + q)·n + r)·n + s`.
    h2: Vec<f64>,
}

impl FcidumpData {
    pub fn new(n_orb: usize, n_elec: usize, ms2: i64) -> Self {
        FcidumpData {
            n_orb,
            n_elec,
            ms2,
            core: 0.0,
            h1: vec![0.0; n_orb * n_orb],
            h2: vec![0.0; n_orb.pow(4)],
        }
    }

    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[p * self.n_orb + q]
    }

    pub fn h2(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_orb;
        self.h2[((p * n + q) * n + r) * n + s]
    }

    /// Set `h_pq = h_qp`.
    pub fn set_h1(&mut self, p: usize, q: usize, v: f64) {
        self.h1[p * self.n_orb + q] = v;
        self.h1[q * self.n_orb + p] = v;
    }

    /// Set `(pq|rs)` together with its 8 symmetry partners.
    pub fn set_h2(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n_orb;
        let perms = [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ];
        for (a, b, c, d) in perms {
            self.h2[((a * n + b) * n + c) * n + d] = v;
        }
    }

    /// Serialize in the same text convention `parse_fcidump` reads.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "&FCI NORB={},NELEC={},MS2={},",
            self.n_orb, self.n_elec, self.ms2
        );
        let _ = writeln!(out, "&END");
        let n = self.n_orb;
        // unique two-electron entries under 8-fold symmetry
        for p in 0..n {
            for q in 0..=p {
                for r in 0..=p {
                    let s_max = if r == p { q } else { r };
                    for s in 0..=s_max {
                        let v = self.h2(p, q, r, s);
                        if v != 0.0 {
                            let _ = writeln!(
                                out,
                                "{:24.16e} {} {} {} {}",
                                v,
                                p + 1,
                                q + 1,
                                r + 1,
                                s + 1
                            );
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..=p {
                let v = self.h1(p, q);
                if v != 0.0 {
                    let _ = writeln!(out, "{:24.16e} {} {} 0 0", v, p + 1, q + 1);
                }
            }
        }
        let _ = writeln!(out, "{:24.16e} 0 0 0 0", self.core);
        out
    }
}

/// Parse FCIDUMP text.
pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let mut lines = text.lines();
    let mut header = String::new();
    let mut body_start: Vec<&str> = Vec::new();
    let mut in_header = true;
    for line in lines.by_ref() {
        let t = line.trim();
        if in_header {
            header.push(' ');
            header.push_str(t);
            let upper = t.to_ascii_uppercase();
            if upper.contains("&END") || t == "/" || upper.ends_with('/') {
                in_header = false;
            }
        } else {
            body_start.push(line);
        }
    }
    if in_header {
        return Err(Error::Parse("missing &END or / header terminator".into()));
    }

    let upper = header.to_ascii_uppercase();
    if !upper.contains("&FCI") {
        return Err(Error::Parse("missing &FCI header".into()));
    }
    let n_orb = header_int(&upper, "NORB")? as usize;
    let n_elec = header_int(&upper, "NELEC")? as usize;
    let ms2 = header_int(&upper, "MS2").unwrap_or(0);
    if n_orb == 0 {
        return Err(Error::Parse("NORB must be positive".into()));
    }

    let mut data = FcidumpData::new(n_orb, n_elec, ms2);
    let mut seen_core = false;
    for line in body_start {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!("expected `value i j k l`, got: {t}")));
        }
        let v: f64 = parse_fortran_float(fields[0])?;
        let idx: Vec<i64> = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad index `{f}` in line: {t}")))
            })
            .collect::<Result<_>>()?;
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        for &x in &idx {
            if x < 0 || x as usize > n_orb {
                return Err(Error::Parse(format!("index {x} out of range 0..={n_orb}")));
            }
        }
        match (i, j, k, l) {
            (0, 0, 0, 0) => {
                if seen_core {
                    data.core += v;
                } else {
                    data.core = v;
                    seen_core = true;
                }
            }
            (i, j, 0, 0) if i > 0 && j > 0 => {
                let (p, q) = (i as usize - 1, j as usize - 1);
                let old = data.h1(p, q);
                if old != 0.0 && (old - v).abs() > 1e-10 {
                    return Err(Error::Parse(format!(
                        "conflicting h({i},{j}) entries: {old} vs {v}"
                    )));
                }
                data.set_h1(p, q, v);
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (p, q, r, s) =
                    (i as usize - 1, j as usize - 1, k as usize - 1, l as usize - 1);
                let old = data.h2(p, q, r, s);
                if old != 0.0 && (old - v).abs() > 1e-10 {
                    return Err(Error::Parse(format!(
                        "conflicting ({i}{j}|{k}{l}) entries: {old} vs {v}"
                    )));
                }
                data.set_h2(p, q, r, s, v);
            }
            _ => {
                return Err(Error::Parse(format!("mixed zero/nonzero indices in line: {t}")));
            }
        }
    }
    Ok(data)
}

fn header_int(header_upper: &str, key: &str) -> Result<i64> {
    let pos = header_upper
        .find(key)
        .ok_or_else(|| Error::Parse(format!("missing {key} in header")))?;
    let rest = &header_upper[pos + key.len()..];
    let rest = rest.trim_start();
    let rest = rest
        .strip_prefix('=')
        .ok_or_else(|| Error::Parse(format!("missing `=` after {key}")))?;
    let rest = rest.trim_start();
    let end = rest
        .find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+'))
        .unwrap_or(rest.len());
    rest[..end]
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad integer for {key}")))
}

/// Accept Fortran `D` exponents alongside `E`.
fn parse_fortran_float(s: &str) -> Result<f64> {
    let normalized = s.replace(['D', 'd'], "E");
    normalized
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad float `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::build_active_space_hamiltonian;
    use crate::operators::dense::{fermion_operator_matrix, spin_operator_matrix};
    use crate::operators::fermion::{FermionOperator, Ladder};
    use num_complex::Complex64;

    #[test]
    fn core_only_file() {
        let d = parse_fcidump("&FCI NORB=1,NELEC=1,MS2=1,\n&END\n-1.0 0 0 0 0\n").unwrap();
        assert_eq!(d.n_orb, 1);
        assert_eq!(d.n_elec, 1);
        assert_eq!(d.ms2, 1);
        assert!((d.core + 1.0).abs() < 1e-15);
        assert_eq!(d.h1(0, 0), 0.0);
    }

    #[test]
    fn slash_terminated_header_and_fortran_exponent() {
        let d = parse_fcidump("&FCI NORB=2, NELEC=2, MS2=0,\n/\n0.5D0 1 1 1 1\n").unwrap();
        assert!((d.h2(0, 0, 0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eightfold_symmetry_expansion() {
        let text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n0.5 1 1 1 1\n0.25 2 1 2 1\n";
        let d = parse_fcidump(text).unwrap();
        for (p, q, r, s) in [
            (1usize, 0usize, 1usize, 0usize),
            (0, 1, 1, 0),
            (1, 0, 0, 1),
            (0, 1, 0, 1),
        ] {
            assert!((d.h2(p, q, r, s) - 0.25).abs() < 1e-15, "({p}{q}|{r}{s})");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_fcidump("NORB=2\n1.0 0 0 0 0\n").is_err());
        assert!(parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n1.0 5 1 0 0\n").is_err());
        assert!(parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n1.0 1 1\n").is_err());
        // conflicting duplicate
        assert!(parse_fcidump(
            "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n1.0 1 2 0 0\n2.0 2 1 0 0\n"
        )
        .is_err());
    }

    #[test]
    fn serialize_round_trips_exactly() {
        let mut d = FcidumpData::new(3, 4, 0);
        d.core = -7.25;
        d.set_h1(0, 0, -1.5);
        d.set_h1(0, 2, 0.125);
        d.set_h1(1, 1, -0.75);
        d.set_h2(0, 0, 0, 0, 0.625);
        d.set_h2(1, 0, 2, 1, 0.0625);
        d.set_h2(2, 2, 1, 1, 0.25);
        let text = d.serialize();
        let p = parse_fcidump(&text).unwrap();
        assert_eq!(p.n_orb, d.n_orb);
        assert_eq!(p.n_elec, d.n_elec);
        assert_eq!(p.core, d.core);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(p.h1(a, b), d.h1(a, b));
                for c in 0..3 {
                    for e in 0..3 {
                        assert_eq!(p.h2(a, b, c, e), d.h2(a, b, c, e));
                    }
                }
            }
        }
    }

    fn synthetic_two_orbital() -> FcidumpData {
        let mut d = FcidumpData::new(2, 2, 0);
        d.core = 0.3;
        d.set_h1(0, 0, -1.2);
        d.set_h1(1, 1, -0.8);
        d.set_h1(0, 1, 0.3);
        d.set_h2(0, 0, 0, 0, 0.7);
        d.set_h2(1, 1, 1, 1, 0.6);
        d.set_h2(0, 0, 1, 1, 0.4);
        d.set_h2(0, 1, 0, 1, 0.15);
        d.set_h2(0, 0, 0, 1, 0.1);
        d
    }

    /// Independent oracle: normal-ordered two-body form
    /// `Σ h_pq Ê_pq + ½ Σ (pq|rs) Σ_στ c†_pσ c†_rτ c_sτ c_qσ + core`.
    fn oracle_matrix(d: &FcidumpData) -> nalgebra::DMatrix<Complex64> {
        let n = d.n_orb;
        let one = Complex64::new(1.0, 0.0);
        let mut op = FermionOperator::identity(Complex64::new(d.core, 0.0));
        for p in 0..n {
            for q in 0..n {
                let h = d.h1(p, q);
                if h == 0.0 {
                    continue;
                }
                for spin in 0..2 {
                    op = op.add(&FermionOperator::hop(one * h, 2 * p + spin, 2 * q + spin));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let g = d.h2(p, q, r, s);
                        if g == 0.0 {
                            continue;
                        }
                        for sig in 0..2 {
                            for tau in 0..2 {
                                op = op.add(&FermionOperator::term(
                                    one * (g / 2.0),
                                    vec![
                                        Ladder::Create(2 * p + sig),
                                        Ladder::Create(2 * r + tau),
                                        Ladder::Annihilate(2 * s + tau),
                                        Ladder::Annihilate(2 * q + sig),
                                    ],
                                ));
                            }
                        }
                    }
                }
            }
        }
        fermion_operator_matrix(&op, 2 * n).unwrap()
    }

    #[test]
    fn active_space_hamiltonian_matches_normal_ordered_oracle() {
        let d = synthetic_two_orbital();
        let h = build_active_space_hamiltonian(&d).unwrap();
        let built = spin_operator_matrix(&h.total_spin_operator().unwrap(), 4).unwrap();
        let oracle = oracle_matrix(&d);
        assert!((built - oracle).norm() < 1e-12);
    }

    #[test]
    fn diagonal_integrals_give_diagonal_hamiltonian() {
        let mut d = FcidumpData::new(2, 2, 0);
        d.set_h1(0, 0, -1.0);
        d.set_h1(1, 1, -0.5);
        d.set_h2(0, 0, 1, 1, 0.25);
        let h = build_active_space_hamiltonian(&d).unwrap();
        let m = spin_operator_matrix(&h.total_spin_operator().unwrap(), 4).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    assert!(m[(i, j)].norm() < 1e-14);
                }
            }
        }
    }
}
