//! 8-dimensional Sobol low-discrepancy sequence with Gray-code updates and
//! direction-number table ingestion.
//!
//! Dimension 1 is the implicit van der Corput base-2 dimension; dimensions
//! 2 and up come from a direction-number table in the widely published
//! `d s a m_1 .. m_s` text layout. A table for dimensions 2..=16 is embedded
//! as the default, with headroom beyond the 8 dimensions the sampling design
//! uses.

use std::io::BufRead;

use crate::error::{BnsError, Result};

/// Direction-number table rows for dimensions ≥ 2.
#[derive(Debug, Clone)]
pub struct DirectionTable {
    rows: Vec<TableRow>,
}

#[derive(Debug, Clone)]
struct TableRow {
    degree: usize,
    poly: u32,
    m: Vec<u32>,
}

/// Joe-Kuo style direction numbers for dimensions 2..=16.
const EMBEDDED_TABLE: &str = "\
d       s       a       m_i
2       1       0       1
3       2       1       1 3
4       3       1       1 3 1
5       3       2       1 1 1
6       4       1       1 1 3 3
7       4       4       1 3 5 13
8       5       2       1 1 5 5 17
9       5       4       1 1 5 5 5
10      5       7       1 1 7 11 19
11      5       11      1 1 5 1 1
12      5       13      1 1 1 3 11
13      5       14      1 3 5 5 31
14      6       1       1 3 3 9 7 49
15      6       13      1 1 1 15 21 21
16      6       16      1 3 1 13 27 49
";

impl DirectionTable {
    /// The built-in table, used when no file is supplied.
    pub fn embedded() -> Self {
        load_direction_table(EMBEDDED_TABLE.as_bytes()).expect("embedded table is valid")
    }

    /// Highest dimension this table supports (counting the implicit first).
    pub fn max_dimension(&self) -> usize {
        self.rows.len() + 1
    }
}

/// Parses a direction-number table from the published text layout:
/// one line `d s a m_1 .. m_s` per dimension ≥ 2, `#` comments allowed,
/// and an optional leading `d s a m_i` header line.
pub fn load_direction_table<R: BufRead>(source: R) -> Result<DirectionTable> {
    let mut rows: Vec<TableRow> = Vec::new();
    let mut seen_content = false;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if !seen_content && tokens == ["d", "s", "a", "m_i"] {
            seen_content = true;
            continue;
        }
        seen_content = true;

        let err = |msg: String| BnsError::parse(format!("line {lineno}"), msg);
        let parse_u64 = |tok: &str| -> Result<u64> {
            tok.parse::<u64>()
                .map_err(|_| err(format!("expected an integer, got {tok:?}")))
        };

        if tokens.len() < 3 {
            return Err(err("expected `d s a m_1 .. m_s`".into()));
        }
        let d = parse_u64(tokens[0])? as usize;
        let s = parse_u64(tokens[1])? as usize;
        let a = parse_u64(tokens[2])?;
        let expected_d = rows.len() + 2;
        if d != expected_d {
            return Err(err(format!("expected dimension {expected_d}, got {d}")));
        }
        if s == 0 || s > 32 {
            return Err(err(format!("degree s must be in 1..=32, got {s}")));
        }
        let poly_ok = if s == 1 { a == 0 } else { a < 1u64 << (s - 1) };
        if !poly_ok {
            return Err(err(format!("polynomial word {a} too large for degree {s}")));
        }
        if tokens.len() != 3 + s {
            return Err(err(format!(
                "expected {s} direction integers, got {}",
                tokens.len() - 3
            )));
        }
        let mut m = Vec::with_capacity(s);
        for (j, tok) in tokens[3..].iter().enumerate() {
            let mj = parse_u64(tok)?;
            if mj % 2 == 0 {
                return Err(err(format!("m_{} = {mj} must be odd", j + 1)));
            }
            if mj >= 1u64 << (j + 1) {
                return Err(err(format!("m_{} = {mj} must be < 2^{}", j + 1, j + 1)));
            }
            m.push(mj as u32);
        }
        rows.push(TableRow {
            degree: s,
            poly: a as u32,
            m,
        });
    }
    if rows.is_empty() {
        return Err(BnsError::parse("end of input", "no dimensions"));
    }
    if rows.len() + 1 < 8 {
        return Err(BnsError::parse(
            "end of input",
            format!("table covers {} dimensions, need at least 8", rows.len() + 1),
        ));
    }
    Ok(DirectionTable { rows })
}

/// Expands `(s, a, m)` to 32 direction integers `v_k = m_k · 2^{32-k}` via
/// the primitive-polynomial recurrence.
fn expand_directions(row: &TableRow) -> [u32; 32] {
    let s = row.degree;
    let mut v = [0u32; 32];
    for (k, &mk) in row.m.iter().enumerate() {
        v[k] = mk << (31 - k);
    }
    for k in s..32 {
        let mut val = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (row.poly >> (s - 1 - j)) & 1 == 1 {
                val ^= v[k - j];
            }
        }
        v[k] = val;
    }
    v
}

/// A Sobol point stream over `[0,1)^d`.
///
/// Index 0 (the all-zeros point) is skipped: the first emitted point is
/// index 1, which every standard table maps to (0.5, .., 0.5). The point at
/// index `n` is a pure function of the table and `n`, so streams can be
/// re-positioned with [`SobolStream::skip_to`].
#[derive(Debug, Clone)]
pub struct SobolStream {
    directions: Vec<[u32; 32]>,
    state: Vec<u32>,
    index: u64,
}

impl SobolStream {
    pub fn new(dimensions: usize, table: &DirectionTable) -> Result<Self> {
        if dimensions == 0 {
            return Err(BnsError::Config("need at least one dimension".into()));
        }
        if dimensions > table.max_dimension() {
            return Err(BnsError::Config(format!(
                "table supports {} dimensions, requested {dimensions}",
                table.max_dimension()
            )));
        }
        let mut directions = Vec::with_capacity(dimensions);
        let mut van_der_corput = [0u32; 32];
        for (k, v) in van_der_corput.iter_mut().enumerate() {
            *v = 1u32 << (31 - k);
        }
        directions.push(van_der_corput);
        for row in table.rows.iter().take(dimensions - 1) {
            directions.push(expand_directions(row));
        }
        Ok(Self {
            state: vec![0; dimensions],
            directions,
            index: 0,
        })
    }

    pub fn dimensions(&self) -> usize {
        self.state.len()
    }

    /// Index of the most recently emitted point (0 if none yet).
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Emits the next point, advancing the stream.
    pub fn next_point(&mut self) -> Result<Vec<f64>> {
        let next = self.index + 1;
        if next > u32::MAX as u64 {
            return Err(BnsError::Config(
                "sobol stream exhausted: index past 2^32 - 1".into(),
            ));
        }
        let flip = (next as u32).trailing_zeros() as usize;
        self.index = next;
        let mut out = Vec::with_capacity(self.state.len());
        for (st, dirs) in self.state.iter_mut().zip(&self.directions) {
            *st ^= dirs[flip];
            out.push(*st as f64 / (u32::MAX as f64 + 1.0));
        }
        Ok(out)
    }

    /// Re-positions the stream so the next emitted point has index `n ≥ 1`.
    /// Supports deterministic partitioning of work across streams.
    pub fn skip_to(&mut self, n: u64) -> Result<()> {
        if n == 0 || n > u32::MAX as u64 {
            return Err(BnsError::Config(format!(
                "skip_to index must be in 1..=2^32-1, got {n}"
            )));
        }
        let prev = (n - 1) as u32;
        let gray = prev ^ (prev >> 1);
        for (d, st) in self.state.iter_mut().enumerate() {
            let mut acc = 0u32;
            for bit in 0..32 {
                if (gray >> bit) & 1 == 1 {
                    acc ^= self.directions[d][bit];
                }
            }
            *st = acc;
        }
        self.index = n - 1;
        Ok(())
    }

    /// The point at index `n` without touching stream state.
    pub fn point_at(&self, n: u32) -> Vec<f64> {
        let gray = n ^ (n >> 1);
        self.directions
            .iter()
            .map(|dirs| {
                let mut acc = 0u32;
                for bit in 0..32 {
                    if (gray >> bit) & 1 == 1 {
                        acc ^= dirs[bit];
                    }
                }
                acc as f64 / (u32::MAX as f64 + 1.0)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream8() -> SobolStream {
        SobolStream::new(8, &DirectionTable::embedded()).unwrap()
    }

    #[test]
    fn first_point_is_all_halves() {
        let mut s = stream8();
        let p = s.next_point().unwrap();
        assert!(p.iter().all(|&x| x == 0.5), "{p:?}");
    }

    #[test]
    fn dimension_one_matches_van_der_corput_gray_order() {
        let mut s = stream8();
        for n in 1..=200u32 {
            let p = s.next_point().unwrap();
            assert_eq!(p[0], bns_oracle::van_der_corput_gray(n), "index {n}");
        }
    }

    #[test]
    fn streams_are_deterministic_and_skippable() {
        let mut a = stream8();
        let mut b = stream8();
        for _ in 0..500 {
            assert_eq!(a.next_point().unwrap(), b.next_point().unwrap());
        }
        let mut c = stream8();
        c.skip_to(501).unwrap();
        assert_eq!(a.next_point().unwrap(), c.next_point().unwrap());
        assert_eq!(a.point_at(700), c.point_at(700));
    }

    #[test]
    fn stratification_low_resolutions() {
        // Among any aligned block of 2^k consecutive indices, each dyadic
        // interval of width 2^-k receives exactly one coordinate.
        let s = stream8();
        for dim in 0..8 {
            for k in 1..=10u32 {
                let bins = 1usize << k;
                for block in [0u32, 1, 3] {
                    let mut counts = vec![0u32; bins];
                    let base = block * bins as u32;
                    for i in 0..bins as u32 {
                        let x = s.point_at(base + i)[dim];
                        counts[(x * bins as f64) as usize] += 1;
                    }
                    assert!(
                        counts.iter().all(|&c| c == 1),
                        "dim {dim} k {k} block {block}"
                    );
                }
            }
        }
    }

    #[test]
    fn coordinates_stay_in_unit_interval() {
        let mut s = stream8();
        for _ in 0..4096 {
            let p = s.next_point().unwrap();
            assert!(p.iter().all(|&x| (0.0..1.0).contains(&x)));
        }
    }

    #[test]
    fn parses_single_row_example() {
        let table = load_direction_table("2 1 0 1\n3 2 1 1 3\n4 3 1 1 3 1\n5 3 2 1 1 1\n6 4 1 1 1 3 3\n7 4 4 1 3 5 13\n8 5 2 1 1 5 5 17\n".as_bytes()).unwrap();
        assert_eq!(table.max_dimension(), 8);
        assert_eq!(table.rows[0].degree, 1);
        assert_eq!(table.rows[0].poly, 0);
        assert_eq!(table.rows[0].m, vec![1]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let empty = load_direction_table("".as_bytes());
        assert!(matches!(empty, Err(BnsError::Parse { .. })));
        assert!(format!("{}", empty.unwrap_err()).contains("no dimensions"));

        // Even m_2 violates the oddness rule.
        let even = load_direction_table("2 1 0 1\n3 2 1 1 2\n".as_bytes());
        let msg = format!("{}", even.unwrap_err());
        assert!(msg.contains("line 2") && msg.contains("odd"), "{msg}");

        let junk = load_direction_table("2 1 0 1\nnot numbers\n".as_bytes());
        assert!(format!("{}", junk.unwrap_err()).contains("line 2"));

        // m_j >= 2^j.
        let big = load_direction_table("2 1 0 1\n3 2 1 1 5\n".as_bytes());
        assert!(format!("{}", big.unwrap_err()).contains("2^2"));
    }

    #[test]
    fn index_overflow_is_an_error() {
        let mut s = stream8();
        s.skip_to(u32::MAX as u64).unwrap();
        assert!(s.next_point().is_ok());
        assert!(s.next_point().is_err());
    }
}
