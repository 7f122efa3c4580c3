//! Flat text stack description.
//!
//! ```text
//! # SiO2 on Si
//! ambient 1.0
//! layer 1.46 0 100
//! substrate 3.85 0.02
//! wavelength 632.8
//! angle 70
//! ```
//!
//! Keywords may appear in any order; `layer` lines are taken top (ambient side)
//! to bottom. Angles are in degrees, lengths in nanometers.

use std::fmt;

use num_complex::Complex;

use super::{Layer, LayerStack};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn number<T: Real>(line: usize, tok: &str) -> Result<T> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a number: {tok:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite value: {tok:?}"),
        });
    }
    Ok(T::lit(v))
}

fn set_once<V>(slot: &mut Option<V>, value: V, line: usize, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Parse {
            line,
            msg: format!("duplicate `{key}`"),
        });
    }
    *slot = Some(value);
    Ok(())
}

/// Parses and validates a stack description.
pub fn parse_stack<T: Real>(text: &str) -> Result<LayerStack<T>> {
    let mut ambient = None;
    let mut substrate = None;
    let mut wavelength = None;
    let mut angle = None;
    let mut layers = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap_or_default();
        let args = toks
            .map(|t| number::<T>(line, t))
            .collect::<Result<Vec<T>>>()?;
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if args.len() < lo || args.len() > hi {
                Err(Error::Parse {
                    line,
                    msg: format!("`{key}` takes {lo}..={hi} values, got {}", args.len()),
                })
            } else {
                Ok(())
            }
        };
        let complex = |a: &[T]| Complex::new(a[0], a.get(1).copied().unwrap_or_else(T::zero));
        match key {
            "ambient" => {
                arity(1, 2)?;
                set_once(&mut ambient, complex(&args), line, key)?;
            }
            "substrate" => {
                arity(1, 2)?;
                set_once(&mut substrate, complex(&args), line, key)?;
            }
            "layer" => {
                arity(3, 3)?;
                layers.push(Layer {
                    index: Complex::new(args[0], args[1]),
                    thickness_nm: args[2],
                });
            }
            "wavelength" => {
                arity(1, 1)?;
                set_once(&mut wavelength, args[0], line, key)?;
            }
            "angle" => {
                arity(1, 1)?;
                set_once(&mut angle, args[0].to_radians(), line, key)?;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 0,
        msg: format!("missing `{what}`"),
    };
    let stack = LayerStack {
        ambient_index: ambient.ok_or_else(|| missing("ambient"))?,
        layers,
        substrate_index: substrate.ok_or_else(|| missing("substrate"))?,
        wavelength_nm: wavelength.ok_or_else(|| missing("wavelength"))?,
        angle_of_incidence: angle.ok_or_else(|| missing("angle"))?,
    };
    stack.validate()?;
    Ok(stack)
}

impl<T: Real> fmt::Display for LayerStack<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |z: Complex<T>| format!("{} {}", z.re.to_f64_lossy(), z.im.to_f64_lossy());
        writeln!(f, "ambient {}", c(self.ambient_index))?;
        for l in &self.layers {
            writeln!(f, "layer {} {}", c(l.index), l.thickness_nm.to_f64_lossy())?;
        }
        writeln!(f, "substrate {}", c(self.substrate_index))?;
        writeln!(f, "wavelength {}", self.wavelength_nm.to_f64_lossy())?;
        writeln!(f, "angle {}", self.angle_of_incidence.to_degrees().to_f64_lossy())
    }
}
