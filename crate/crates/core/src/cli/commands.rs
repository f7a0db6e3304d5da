use rayon::prelude::*;

use super::args::{PhaseMode, Quantity, Scheme};
use super::table::{Cell, Table};
use super::CliError;
use crate::error::Error;
use crate::evolution::{evolve, Propagation};
use crate::linalg::{Label, SpinParams, TwoSpinState, C64};
use crate::phases::{aa_breakdown, adiabatic_phases, PhaseBreakdown};
use crate::spectral::{eigensystem, tilde_eigensystem};
use crate::twocycle::{adiabatic_eigenpath_phase, one_cycle_dynamical_residual, run_aa_two_cycle};

const PHASE_COLUMNS: [&str; 7] = [
    "n",
    "total",
    "dynamical",
    "geometric",
    "total_principal",
    "dynamical_principal",
    "geometric_principal",
];

fn method_for(steps: Option<usize>) -> Propagation {
    match steps {
        Some(steps) => Propagation::Stepped { steps },
        None => Propagation::Exact,
    }
}

fn spectrum_rows(p: &SpinParams) -> Result<Vec<Vec<Cell>>, Error> {
    let sys = eigensystem(p, 0.0)?;
    Ok(Label::ALL
        .iter()
        .map(|l| vec![Cell::from(l.get()), Cell::from(sys.energy(*l))])
        .collect())
}

fn phase_row(b: &PhaseBreakdown) -> Vec<Cell> {
    let pv = b.principal();
    vec![
        Cell::from(b.label.get()),
        Cell::from(b.total),
        Cell::from(b.dynamical),
        Cell::from(b.geometric),
        Cell::from(pv.total),
        Cell::from(pv.dynamical),
        Cell::from(pv.geometric),
    ]
}

fn phase_rows(p: &SpinParams, mode: PhaseMode) -> Result<Vec<Vec<Cell>>, Error> {
    Label::ALL
        .iter()
        .map(|l| {
            let b = match mode {
                PhaseMode::Berry => adiabatic_phases(p, *l)?,
                PhaseMode::Aa => aa_breakdown(p, *l)?,
            };
            Ok(phase_row(&b))
        })
        .collect()
}

pub fn spectrum(p: &SpinParams) -> Result<Table, CliError> {
    let mut t = Table::new("spectrum", &["n", "energy"]);
    t.echo_params(p);
    for row in spectrum_rows(p)? {
        t.push(row);
    }
    Ok(t)
}

pub fn phases(p: &SpinParams, mode: PhaseMode) -> Result<Table, CliError> {
    let mut t = Table::new("phases", &PHASE_COLUMNS);
    t.echo_params(p);
    t.echo(
        "mode",
        Cell::from(match mode {
            PhaseMode::Berry => "berry",
            PhaseMode::Aa => "aa",
        }),
    );
    for row in phase_rows(p, mode)? {
        t.push(row);
    }
    Ok(t)
}

pub fn parse_initial(text: &str, p: &SpinParams) -> Result<TwoSpinState, CliError> {
    let named = match text {
        "uu" | "up_up" => Some(TwoSpinState::up_up()),
        "ud" | "up_down" => Some(TwoSpinState::up_down()),
        "du" | "down_up" => Some(TwoSpinState::down_up()),
        "dd" | "down_down" => Some(TwoSpinState::down_down()),
        "singlet" => Some(TwoSpinState::singlet()),
        _ => None,
    };
    if let Some(s) = named {
        return Ok(s);
    }
    for (prefix, tilde) in [("xi", false), ("tilde", true)] {
        if let Some(n) = text.strip_prefix(prefix) {
            let label = n
                .parse::<u8>()
                .map_err(|_| CliError::Usage(format!("bad eigenstate label in --initial {text}")))
                .and_then(|n| Label::new(n).map_err(CliError::Param))?;
            let sys = if tilde { tilde_eigensystem(p)? } else { eigensystem(p, 0.0)? };
            return Ok(*sys.state(label));
        }
    }
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse --initial {text}")))?;
    if values.len() != 8 {
        return Err(CliError::Usage(format!(
            "--initial expects 8 comma-separated reals, got {}",
            values.len()
        )));
    }
    let amps = [0, 1, 2, 3].map(|k| C64::new(values[2 * k], values[2 * k + 1]));
    Ok(TwoSpinState::new(amps).map_err(CliError::Param)?)
}

pub fn evolve_cmd(p: &SpinParams, initial: &str, time: f64, steps: Option<usize>) -> Result<Table, CliError> {
    if !time.is_finite() {
        return Err(CliError::Param(Error::NonFinite("time")));
    }
    let start = parse_initial(initial, p)?;
    let method = method_for(steps);
    let run = evolve(p, &start, time, method)?;
    let mut t = Table::new("evolve", &["index", "basis", "re", "im", "probability"]);
    t.echo_params(p);
    t.echo("time", Cell::from(time));
    t.echo("initial", Cell::from(initial));
    t.echo(
        "method",
        Cell::from(match method {
            Propagation::Exact => "exact",
            Propagation::Stepped { .. } => "stepped",
        }),
    );
    if let Some(steps) = steps {
        t.echo("steps", Cell::Int(steps as i64));
    }
    t.echo("unitarity_defect", Cell::from(run.unitarity_defect));
    for (k, (amp, name)) in run
        .final_state
        .amplitudes()
        .iter()
        .zip(["uu", "ud", "du", "dd"])
        .enumerate()
    {
        t.push(vec![
            Cell::Int(k as i64),
            Cell::from(name),
            Cell::from(amp.re),
            Cell::from(amp.im),
            Cell::from(amp.norm_sqr()),
        ]);
    }
    Ok(t)
}

pub fn twocycle(
    p: &SpinParams,
    scheme: Scheme,
    omega1_sweep: Option<&[f64]>,
    steps: Option<usize>,
) -> Result<Table, CliError> {
    let omegas: Vec<f64> = omega1_sweep.map(<[f64]>::to_vec).unwrap_or_else(|| vec![p.omega1]);
    let mut t = match scheme {
        Scheme::Adiabatic => Table::new("twocycle", &["omega1", "n", "phase", "ideal", "error", "fidelity"]),
        Scheme::Aa => Table::new(
            "twocycle",
            &["omega1", "n", "one_cycle_dynamical", "two_cycle_phase", "identity_defect"],
        ),
    };
    t.echo_params(p);
    t.echo(
        "scheme",
        Cell::from(match scheme {
            Scheme::Adiabatic => "adiabatic",
            Scheme::Aa => "aa",
        }),
    );
    let method = method_for(steps);
    for w1 in omegas {
        if !w1.is_finite() {
            return Err(CliError::Param(Error::NonFinite("omega1")));
        }
        let q = SpinParams { omega1: w1, ..*p };
        match scheme {
            Scheme::Adiabatic => {
                for label in Label::ALL {
                    let e = adiabatic_eigenpath_phase(&q, label, method)?;
                    let error = crate::phases::principal_value(e.phase - e.ideal).abs();
                    t.push(vec![
                        Cell::from(w1),
                        Cell::from(label.get()),
                        Cell::from(e.phase),
                        Cell::from(e.ideal),
                        Cell::from(error),
                        Cell::from(e.fidelity),
                    ]);
                }
            }
            Scheme::Aa => {
                let sys = tilde_eigensystem(&q)?;
                for label in Label::ALL {
                    let start = sys.state(label);
                    let run = run_aa_two_cycle(&q, start)?;
                    t.push(vec![
                        Cell::from(w1),
                        Cell::from(label.get()),
                        Cell::from(one_cycle_dynamical_residual(&q, label)?),
                        Cell::from(start.inner(&run.final_state).arg()),
                        Cell::from(run.identity_defect),
                    ]);
                }
            }
        }
    }
    Ok(t)
}

/// One axis of a sweep grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn parse(text: &str) -> Result<Axis, CliError> {
        let bad = || CliError::Usage(format!("--axis expects name=start:stop:count, got {text}"));
        let (name, range) = text.split_once('=').ok_or_else(bad)?;
        let name = canonical_axis(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown sweep axis {name}")))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::Usage(format!("axis {name} has a non-finite bound")));
        }
        if count == 0 {
            return Err(CliError::Usage(format!("axis {name} needs count >= 1")));
        }
        if start > stop {
            return Err(CliError::Usage(format!("axis {name} needs start <= stop")));
        }
        Ok(Axis {
            name,
            start,
            stop,
            count,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.start
        } else if i + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }
}

fn canonical_axis(name: &str) -> Option<&'static str> {
    Some(match name {
        "omega0" => "omega0",
        "omega_a0" | "omega-a0" => "omega_a0",
        "omega_b0" | "omega-b0" => "omega_b0",
        "gamma" => "gamma",
        "gamma_a" | "gamma-a" => "gamma_a",
        "gamma_b" | "gamma-b" => "gamma_b",
        "J" | "j" => "J",
        "omega1" => "omega1",
        _ => return None,
    })
}

fn set_axis(p: &mut SpinParams, name: &str, v: f64) {
    match name {
        "omega0" => {
            p.omega_a0 = v;
            p.omega_b0 = v;
        }
        "omega_a0" => p.omega_a0 = v,
        "omega_b0" => p.omega_b0 = v,
        "gamma" => {
            p.gamma_a = v;
            p.gamma_b = v;
        }
        "gamma_a" => p.gamma_a = v,
        "gamma_b" => p.gamma_b = v,
        "J" => p.j = v,
        "omega1" => p.omega1 = v,
        _ => unreachable!("axis names are canonical"),
    }
}

/// Grid indices in lexicographic order, first axis slowest.
fn grid(axes: &[Axis]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..axis.count).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn sweep(base: &SpinParams, axis_specs: &[String], quantity: Quantity) -> Result<Table, CliError> {
    let axes: Vec<Axis> = axis_specs.iter().map(|s| Axis::parse(s)).collect::<Result<_, _>>()?;
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("axis {} given twice", a.name)));
        }
    }

    let mut columns: Vec<&str> = axes.iter().map(|a| a.name).collect();
    match quantity {
        Quantity::Spectrum => columns.extend(["n", "energy"]),
        Quantity::Berry | Quantity::Aa => columns.extend(PHASE_COLUMNS),
        Quantity::TwocycleDefect => columns.push("identity_defect"),
    }
    let mut t = Table::new("sweep", &columns);
    t.echo_params(base);
    t.echo(
        "quantity",
        Cell::from(match quantity {
            Quantity::Spectrum => "spectrum",
            Quantity::Berry => "berry",
            Quantity::Aa => "aa",
            Quantity::TwocycleDefect => "twocycle-defect",
        }),
    );
    for a in &axes {
        t.echo(
            &format!("axis_{}", a.name),
            Cell::Text(format!("{}:{}:{}", a.start, a.stop, a.count)),
        );
    }

    let points = grid(&axes);
    let blocks: Vec<Result<Vec<Vec<Cell>>, CliError>> = points
        .par_iter()
        .map(|idx| {
            let mut p = *base;
            let coords: Vec<f64> = axes.iter().zip(idx).map(|(a, &i)| a.value(i)).collect();
            for (a, v) in axes.iter().zip(&coords) {
                set_axis(&mut p, a.name, *v);
            }
            let rows = match quantity {
                Quantity::Spectrum => spectrum_rows(&p),
                Quantity::Berry => phase_rows(&p, PhaseMode::Berry),
                Quantity::Aa => phase_rows(&p, PhaseMode::Aa),
                Quantity::TwocycleDefect => run_aa_two_cycle(&p, &TwoSpinState::up_up())
                    .map(|r| vec![vec![Cell::from(r.identity_defect)]]),
            }
            .map_err(|e| {
                let at: Vec<String> = axes.iter().zip(&coords).map(|(a, v)| format!("{}={v}", a.name)).collect();
                CliError::at_point(e, &at.join(", "))
            })?;
            Ok(rows
                .into_iter()
                .map(|row| coords.iter().map(|v| Cell::from(*v)).chain(row).collect())
                .collect())
        })
        .collect();
    for block in blocks {
        for row in block? {
            t.push(row);
        }
    }
    Ok(t)
}
