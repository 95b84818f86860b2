//! Line-oriented table files for rings and bimodules.
//!
//! ```text
//! # Z/2Z
//! ring 2
//! one 1
//! add
//! 0 1
//! 1 0
//! mul
//! 0 0
//! 0 1
//! ```
//!
//! Bimodule files start with `bimodule <|A|> <|M|> <|B|>` and carry `add`
//! (`|M|×|M|`), `laction` (`|A|×|M|`) and `raction` (`|M|×|B|`) sections.
//! Lines whose first non-blank character is `#` are comments; blank lines are
//! ignored. The file must end with a newline. Loaders check syntax and index
//! ranges only; axioms are left to the validators.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bimodule::Bimodule;
use crate::ring::RingTables;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct FormatError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
}

/// Raw bimodule tables as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleTables {
    pub a_order: usize,
    pub m_order: usize,
    pub b_order: usize,
    pub add: Vec<u32>,
    pub laction: Vec<u32>,
    pub raction: Vec<u32>,
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Result<Self, FormatError> {
        if !text.is_empty() && !text.ends_with('\n') {
            return Err(FormatError {
                line: text.lines().count(),
                reason: "missing trailing newline".into(),
            });
        }
        Ok(Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        })
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            self.last = i + 1;
            return Ok((i + 1, t));
        }
        Err(FormatError {
            line: self.last + 1,
            reason: format!("unexpected end of file, expected {what}"),
        })
    }

    fn finish(mut self) -> Result<(), FormatError> {
        match self.next("") {
            Ok((line, _)) => Err(FormatError {
                line,
                reason: "trailing content".into(),
            }),
            Err(_) => Ok(()),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FormatError> {
        let (line, t) = self.next(kw)?;
        if t != kw {
            return Err(FormatError {
                line,
                reason: format!("expected '{kw}', found '{t}'"),
            });
        }
        Ok(())
    }

    /// `kw n1 n2 …` with exactly `count` numbers.
    fn header(&mut self, kw: &str, count: usize) -> Result<Vec<usize>, FormatError> {
        let (line, t) = self.next(kw)?;
        let mut parts = t.split_whitespace();
        if parts.next() != Some(kw) {
            return Err(FormatError {
                line,
                reason: format!("expected '{kw}' header"),
            });
        }
        let nums = parse_numbers(line, parts)?;
        if nums.len() != count {
            return Err(FormatError {
                line,
                reason: format!("'{kw}' takes {count} argument(s)"),
            });
        }
        Ok(nums)
    }

    fn table(
        &mut self,
        name: &str,
        rows: usize,
        cols: usize,
        bound: usize,
    ) -> Result<Vec<u32>, FormatError> {
        self.keyword(name)?;
        let mut out = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (line, t) = self.next(&format!("row {r} of '{name}'"))?;
            let nums = parse_numbers(line, t.split_whitespace())?;
            if nums.len() != cols {
                return Err(FormatError {
                    line,
                    reason: format!("row has {} entries, expected {cols}", nums.len()),
                });
            }
            if let Some(v) = nums.iter().find(|&&v| v >= bound) {
                return Err(FormatError {
                    line,
                    reason: format!("index {v} out of range 0..{bound}"),
                });
            }
            out.extend(nums.into_iter().map(|v| v as u32));
        }
        Ok(out)
    }
}

fn parse_numbers<'a>(
    line: usize,
    parts: impl Iterator<Item = &'a str>,
) -> Result<Vec<usize>, FormatError> {
    parts
        .map(|p| {
            p.parse::<usize>().map_err(|_| FormatError {
                line,
                reason: format!("'{p}' is not a base-10 index"),
            })
        })
        .collect()
}

pub fn parse_ring_file(text: &str) -> Result<RingTables, FormatError> {
    let mut lines = Lines::new(text)?;
    let n = lines.header("ring", 1)?[0];
    if n == 0 {
        return Err(FormatError {
            line: lines.last,
            reason: "ring order must be positive".into(),
        });
    }
    let one = lines.header("one", 1)?[0];
    if one >= n {
        return Err(FormatError {
            line: lines.last,
            reason: format!("one = {one} out of range"),
        });
    }
    let add = lines.table("add", n, n, n)?;
    let mul = lines.table("mul", n, n, n)?;
    lines.finish()?;
    Ok(RingTables {
        order: n,
        one,
        add,
        mul,
    })
}

pub fn parse_bimodule_file(text: &str) -> Result<BimoduleTables, FormatError> {
    let mut lines = Lines::new(text)?;
    let h = lines.header("bimodule", 3)?;
    let (a, m, b) = (h[0], h[1], h[2]);
    if a == 0 || m == 0 || b == 0 {
        return Err(FormatError {
            line: lines.last,
            reason: "orders must be positive".into(),
        });
    }
    let add = lines.table("add", m, m, m)?;
    let laction = lines.table("laction", a, m, m)?;
    let raction = lines.table("raction", m, b, m)?;
    lines.finish()?;
    Ok(BimoduleTables {
        a_order: a,
        m_order: m,
        b_order: b,
        add,
        laction,
        raction,
    })
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_ring_file(path: &Path) -> Result<RingTables, LoadError> {
    parse_ring_file(&read(path)?).map_err(|source| LoadError::Format {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_bimodule_file(path: &Path) -> Result<BimoduleTables, LoadError> {
    parse_bimodule_file(&read(path)?).map_err(|source| LoadError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn write_table(out: &mut String, name: &str, table: &[u32], cols: usize) {
    out.push_str(name);
    out.push('\n');
    for row in table.chunks(cols.max(1)) {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn render_ring_file(t: &RingTables) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ring {}", t.order);
    let _ = writeln!(out, "one {}", t.one);
    write_table(&mut out, "add", &t.add, t.order);
    write_table(&mut out, "mul", &t.mul, t.order);
    out
}

pub fn render_bimodule_file(bm: &Bimodule) -> String {
    let (a, m, b) = (
        bm.left_ring().order(),
        bm.group().order(),
        bm.right_ring().order(),
    );
    let mut out = String::new();
    let _ = writeln!(out, "bimodule {a} {m} {b}");
    write_table(&mut out, "add", bm.group().table(), m);
    write_table(&mut out, "laction", bm.laction_table(), m);
    write_table(&mut out, "raction", bm.raction_table(), b);
    out
}
