//! Plain-text instance files.
//!
//! ```text
//! fwsubmix-instance 1
//! dimension 2
//! lambda 0.5
//! flags 0 1 0 0            # g_monotone g_nonneg c_monotone c_nonneg
//! g quadratic
//! matrix 2 2
//! -1 -0.5
//! -0.5 -1
//! vector 2
//! 1 1
//! scalar 10
//! c zero
//! region polytope
//! matrix 1 2
//! 0.5 0.7
//! vector 1
//! 1
//! vector 2
//! 1 1
//! ```
//!
//! Objective kinds and their blocks: `quadratic` (matrix H, vector h,
//! scalar c), `softmax` and `similarity` (kernel matrix), `doptimal`
//! (design matrix), `logbarrier` (scalar scale), `zero` (none). Region
//! kinds: `box` (vector lower, vector upper), `cardinality` (scalar budget),
//! `polytope` (matrix A, vector b, vector u). Numbers are written in
//! shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::objectives::{
    DOptimalObjective, LogBarrierConcave, QpInstance, QuadraticObjective, SimilarityConcave,
    SoftmaxExtension, ZeroObjective,
};
use crate::problem::{ObjectiveFlags, ObjectivePair, ProblemInstance, SharedObjective};
use crate::regions::{FeasibleRegion, RegionKind};

const MAGIC: &str = "fwsubmix-instance";

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    Quadratic {
        hessian: DMatrix<f64>,
        linear: Vec<f64>,
        constant: f64,
    },
    Softmax(DMatrix<f64>),
    Similarity(DMatrix<f64>),
    DOptimal(DMatrix<f64>),
    LogBarrier {
        n: usize,
        scale: f64,
    },
    Zero(usize),
}

impl ObjectiveSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::Quadratic { linear, .. } => linear.len(),
            Self::Softmax(k) | Self::Similarity(k) => k.nrows(),
            Self::DOptimal(y) => y.nrows(),
            Self::LogBarrier { n, .. } | Self::Zero(n) => *n,
        }
    }

    pub fn build(&self) -> Result<SharedObjective> {
        Ok(match self {
            Self::Quadratic {
                hessian,
                linear,
                constant,
            } => Arc::new(QuadraticObjective::new(
                hessian.clone(),
                linear.clone(),
                *constant,
            )?),
            Self::Softmax(k) => Arc::new(SoftmaxExtension::new(k.clone())?),
            Self::Similarity(k) => Arc::new(SimilarityConcave::new(k.clone())?),
            Self::DOptimal(y) => Arc::new(DOptimalObjective::new(y.clone())?),
            Self::LogBarrier { n, scale } => Arc::new(LogBarrierConcave::new(*n, *scale)?),
            Self::Zero(n) => Arc::new(ZeroObjective::new(*n)),
        })
    }

    fn of_quadratic(q: &QuadraticObjective) -> Self {
        Self::Quadratic {
            hessian: q.hessian().clone(),
            linear: q.linear_term().to_vec(),
            constant: q.constant(),
        }
    }
}

/// Serializable description of a problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub g: ObjectiveSpec,
    pub c: ObjectiveSpec,
    pub lambda: f64,
    pub flags: ObjectiveFlags,
    pub region: FeasibleRegion,
}

impl InstanceSpec {
    pub fn from_qp(qp: &QpInstance, lambda: f64) -> Self {
        Self {
            g: ObjectiveSpec::of_quadratic(&qp.g),
            c: ObjectiveSpec::of_quadratic(&qp.c),
            lambda,
            flags: QpInstance::flags(),
            region: qp.region.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn build(&self) -> Result<ProblemInstance> {
        let pair = ObjectivePair::new(self.g.build()?, self.c.build()?, self.lambda)?
            .with_flags(self.flags);
        ProblemInstance::new(pair, self.region.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC} 1");
        let _ = writeln!(out, "dimension {}", self.dim());
        let _ = writeln!(out, "lambda {}", self.lambda);
        let f = self.flags;
        let b = |v: bool| u8::from(v);
        let _ = writeln!(
            out,
            "flags {} {} {} {}",
            b(f.g_monotone),
            b(f.g_nonneg),
            b(f.c_monotone),
            b(f.c_nonneg)
        );
        write_objective(&mut out, "g", &self.g);
        write_objective(&mut out, "c", &self.c);
        match self.region.kind() {
            RegionKind::Box { lower, upper } => {
                out.push_str("region box\n");
                write_vector(&mut out, lower);
                write_vector(&mut out, upper);
            }
            RegionKind::Cardinality { budget, .. } => {
                let _ = writeln!(out, "region cardinality\nscalar {budget}");
            }
            RegionKind::Polytope { a, b, u } => {
                out.push_str("region polytope\n");
                let _ = writeln!(out, "matrix {} {}", a.len(), u.len());
                for row in a {
                    out.push_str(&join(row));
                    out.push('\n');
                }
                write_vector(&mut out, b);
                write_vector(&mut out, u);
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Reader::new(text);
        let (line, toks) = r.next("header")?;
        if toks.first() != Some(&MAGIC) || toks.get(1) != Some(&"1") {
            return Err(Error::Parse {
                line,
                msg: format!("expected '{MAGIC} 1'"),
            });
        }
        let n: usize = r.keyed("dimension")?;
        let lambda: f64 = r.keyed("lambda")?;
        let (line, toks) = r.next("flags")?;
        if toks.len() != 5 || toks[0] != "flags" {
            return Err(Error::Parse {
                line,
                msg: "expected 'flags' with four 0/1 values".into(),
            });
        }
        let bits: Vec<bool> = toks[1..]
            .iter()
            .map(|t| match *t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(Error::Parse {
                    line,
                    msg: format!("flag '{t}' is not 0 or 1"),
                }),
            })
            .collect::<Result<_>>()?;
        let flags = ObjectiveFlags {
            g_monotone: bits[0],
            g_nonneg: bits[1],
            c_monotone: bits[2],
            c_nonneg: bits[3],
        };
        let g = read_objective(&mut r, "g", n)?;
        let c = read_objective(&mut r, "c", n)?;
        let (line, toks) = r.next("region")?;
        let region = match toks.as_slice() {
            ["region", "box"] => {
                let lo = r.vector(n)?;
                let hi = r.vector(n)?;
                FeasibleRegion::boxed(lo, hi)
            }
            ["region", "cardinality"] => FeasibleRegion::cardinality(n, r.scalar()?),
            ["region", "polytope"] => {
                let (line, a) = r.matrix(None, Some(n))?;
                let m = a.nrows();
                let rows = (0..m).map(|i| a.row(i).iter().copied().collect()).collect();
                let b = r.vector(m)?;
                let u = r.vector(n)?;
                FeasibleRegion::polytope(rows, b, u).map_err(|e| at(line, e))
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected 'region box|cardinality|polytope'".into(),
                })
            }
        }
        .map_err(|e| at(line, e))?;
        if let Some((line, _)) = r.peek() {
            return Err(Error::Parse {
                line,
                msg: "unexpected trailing content".into(),
            });
        }
        let spec = Self {
            g,
            c,
            lambda,
            flags,
            region,
        };
        spec.build()
            .map_err(|e| Error::Config(format!("invalid instance: {e}")))?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_vector(out: &mut String, v: &[f64]) {
    let _ = writeln!(out, "vector {}\n{}", v.len(), join(v));
}

fn write_matrix(out: &mut String, m: &DMatrix<f64>) {
    let _ = writeln!(out, "matrix {} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<f64> = m.row(i).iter().copied().collect();
        out.push_str(&join(&row));
        out.push('\n');
    }
}

fn write_objective(out: &mut String, role: &str, spec: &ObjectiveSpec) {
    match spec {
        ObjectiveSpec::Quadratic {
            hessian,
            linear,
            constant,
        } => {
            let _ = writeln!(out, "{role} quadratic");
            write_matrix(out, hessian);
            write_vector(out, linear);
            let _ = writeln!(out, "scalar {constant}");
        }
        ObjectiveSpec::Softmax(k) => {
            let _ = writeln!(out, "{role} softmax");
            write_matrix(out, k);
        }
        ObjectiveSpec::Similarity(k) => {
            let _ = writeln!(out, "{role} similarity");
            write_matrix(out, k);
        }
        ObjectiveSpec::DOptimal(y) => {
            let _ = writeln!(out, "{role} doptimal");
            write_matrix(out, y);
        }
        ObjectiveSpec::LogBarrier { scale, .. } => {
            let _ = writeln!(out, "{role} logbarrier\nscalar {scale}");
        }
        ObjectiveSpec::Zero(_) => {
            let _ = writeln!(out, "{role} zero");
        }
    }
}

fn read_objective(r: &mut Reader<'_>, role: &str, n: usize) -> Result<ObjectiveSpec> {
    let (line, toks) = r.next(role)?;
    if toks.len() != 2 || toks[0] != role {
        return Err(Error::Parse {
            line,
            msg: format!("expected '{role} <kind>'"),
        });
    }
    Ok(match toks[1] {
        "quadratic" => {
            let (_, hessian) = r.matrix(Some(n), Some(n))?;
            let linear = r.vector(n)?;
            let constant = r.scalar()?;
            ObjectiveSpec::Quadratic {
                hessian,
                linear,
                constant,
            }
        }
        "softmax" => ObjectiveSpec::Softmax(r.matrix(Some(n), Some(n))?.1),
        "similarity" => ObjectiveSpec::Similarity(r.matrix(Some(n), Some(n))?.1),
        "doptimal" => ObjectiveSpec::DOptimal(r.matrix(Some(n), None)?.1),
        "logbarrier" => ObjectiveSpec::LogBarrier {
            n,
            scale: r.scalar()?,
        },
        "zero" => ObjectiveSpec::Zero(n),
        other => {
            return Err(Error::Parse {
                line,
                msg: format!("unknown objective kind '{other}'"),
            })
        }
    })
}

/// Line cursor over non-blank, comment-stripped lines.
struct Reader<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                (
                    i + 1,
                    l.split('#')
                        .next()
                        .unwrap_or("")
                        .split_whitespace()
                        .collect(),
                )
            })
            .filter(|(_, t): &(usize, Vec<&str>)| !t.is_empty())
            .collect();
        Self { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &[&'a str])> {
        self.lines.get(self.pos).map(|(l, t)| (*l, t.as_slice()))
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let item = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse {
                line: self.lines.last().map_or(0, |l| l.0) + 1,
                msg: format!("unexpected end of file, expected {what}"),
            })?;
        self.pos += 1;
        Ok(item)
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, toks) = self.next(key)?;
        match toks.as_slice() {
            [k, v] if *k == key => num(line, v),
            _ => Err(Error::Parse {
                line,
                msg: format!("expected '{key} <value>'"),
            }),
        }
    }

    fn scalar(&mut self) -> Result<f64> {
        self.keyed("scalar")
    }

    fn numbers(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let (line, toks) = self.next(what)?;
        if toks.len() != count {
            return Err(Error::Parse {
                line,
                msg: format!("expected {count} numbers, found {}", toks.len()),
            });
        }
        toks.iter().map(|t| num(line, t)).collect()
    }

    fn vector(&mut self, len: usize) -> Result<Vec<f64>> {
        let k: usize = self.keyed("vector")?;
        if k != len {
            let line = self.lines[self.pos - 1].0;
            return Err(Error::Parse {
                line,
                msg: format!("vector length {k}, expected {len}"),
            });
        }
        self.numbers(len, "vector entries")
    }

    fn matrix(
        &mut self,
        rows: Option<usize>,
        cols: Option<usize>,
    ) -> Result<(usize, DMatrix<f64>)> {
        let (line, toks) = self.next("matrix")?;
        let (r, c) = match toks.as_slice() {
            ["matrix", r, c] => (num::<usize>(line, r)?, num::<usize>(line, c)?),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "malformed matrix header, expected 'matrix <rows> <cols>'".into(),
                })
            }
        };
        if rows.is_some_and(|x| x != r) || cols.is_some_and(|x| x != c) {
            return Err(Error::Parse {
                line,
                msg: format!("matrix is {r}x{c}, expected {rows:?}x{cols:?}"),
            });
        }
        let mut m = DMatrix::zeros(r, c);
        for i in 0..r {
            for (j, v) in self.numbers(c, "matrix row")?.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok((line, m))
    }
}

fn num<T: std::str::FromStr>(line: usize, t: &str) -> Result<T> {
    t.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid number '{t}'"),
    })
}
