use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use unruhchan_core::info::{classical_report, quantum_report, ClassicalReport, QuantumReport};
use unruhchan_core::{
    optimal_curve, ChannelParams, Cutoff, Measure, OptConfig, OptResult, Rail, Receiver,
};

use crate::error::CliError;
use crate::settings::{cutoff_cap, parse_range, Channel, Defaults, Settings};
use crate::svg::{Plot, Series, PALETTE};
use crate::table::{optimize_csv, sweep_csv, ResultRow};

const RECEIVERS: [Receiver; 2] = [Receiver::Rob, Receiver::AntiRob];
/// Automatic-cutoff ceiling for figures when neither --nmax nor the
/// environment sets one; single-rail curves reach r = 2.5.
const FIGURE_CAP: usize = 4000;

pub const POINT_DEFAULTS: Defaults = Defaults {
    r: "0",
    qr: "1",
    alpha2: "0.5",
    channel: "both",
    format: "csv",
};

pub const SWEEP_DEFAULTS: Defaults = Defaults {
    r: "0:2.5:0.25",
    qr: "1/sqrt2,0.8,0.9,1",
    alpha2: "0.5",
    channel: "both",
    format: "csv",
};

pub const OPTIMIZE_DEFAULTS: Defaults = Defaults {
    r: "0:2.5:0.25",
    ..SWEEP_DEFAULTS
};

pub const FIGURE_DEFAULTS: Defaults = Defaults {
    format: "both",
    ..SWEEP_DEFAULTS
};

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn only<T: Copy>(what: &str, values: &[T]) -> Result<T, CliError> {
    match values {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!(
            "point takes a single --{what} value"
        ))),
    }
}

fn params(
    s: &Settings,
    rail: Rail,
    r: f64,
    q_r: f64,
    alpha2: f64,
    cutoff: Cutoff,
) -> Result<ChannelParams, CliError> {
    Ok(ChannelParams::new(r, q_r, alpha2, rail)?
        .with_cutoff(cutoff)
        .with_tol(s.tol))
}

pub fn point(s: &Settings) -> Result<String, CliError> {
    let r = only("r", &s.rs)?;
    let q = only("qr", &s.qrs)?;
    let a = only("alpha2", &s.alpha2s)?;
    let p = params(s, s.rail, r, q, a, s.cutoff)?;
    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k}={v}").unwrap();
    // Adding 0.0 turns -0.0 into 0.0.
    let f = |x: f64| format!("{:.6}", x + 0.0);
    line("r", f(p.rindler.r()));
    line("tanh_r", f(p.rindler.tanh_r()));
    line("qR", f(p.weights.q_r()));
    line("qL", f(p.weights.q_l()));
    line("alpha2", f(a));
    line("rail", s.rail.to_string());
    let c = if s.channel.classical() {
        Some(classical_report(&p)?)
    } else {
        None
    };
    let qr = if s.channel.quantum() {
        Some(quantum_report(&p)?)
    } else {
        None
    };
    let cutoff = c.map(|c| c.cutoff).or(qr.map(|q| q.cutoff)).unwrap();
    let deficit = c
        .map_or(0.0, |c| c.deficit)
        .max(qr.map_or(0.0, |q| q.deficit));
    line("N", cutoff.to_string());
    line("deficit", format!("{deficit:.3e}"));
    if let Some(c) = c {
        line("holevo_R", f(c.holevo_r));
        line("holevo_Rbar", f(c.holevo_rbar));
    }
    if let Some(q) = qr {
        line("cohinfo_R", f(-q.cond_r));
        line("cohinfo_Rbar", f(-q.cond_rbar));
        line("cond_R", f(q.cond_r));
        line("cond_Rbar", f(q.cond_rbar));
    }
    Ok(out)
}

fn rows_at(
    rail: Rail,
    (r, q, a): (f64, f64, f64),
    c: Option<ClassicalReport>,
    qr: Option<QuantumReport>,
) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    let mut push =
        |measure: &'static str, rx: Receiver, value: f64, deficit: f64, cutoff: usize| {
            rows.push(ResultRow {
                r,
                q_r: q,
                alpha2: a,
                rail,
                measure,
                receiver: rx,
                value: value + 0.0,
                deficit,
                cutoff,
            })
        };
    if let Some(c) = c {
        for rx in RECEIVERS {
            let v = if rx == Receiver::Rob {
                c.holevo_r
            } else {
                c.holevo_rbar
            };
            push("holevo", rx, v, c.deficit, c.cutoff);
        }
    }
    if let Some(q) = qr {
        for rx in RECEIVERS {
            let v = if rx == Receiver::Rob {
                q.cond_r
            } else {
                q.cond_rbar
            };
            push("cohinfo", rx, -v, q.deficit, q.cutoff);
        }
        for rx in RECEIVERS {
            let v = if rx == Receiver::Rob {
                q.cond_r
            } else {
                q.cond_rbar
            };
            push("cond", rx, v, q.deficit, q.cutoff);
        }
    }
    rows
}

/// Rows in r, qR, alpha2, measure, receiver order. Points are evaluated in
/// parallel; collection keeps the input order.
pub fn evaluate_grid(
    s: &Settings,
    rail: Rail,
    channel: Channel,
    rs: &[f64],
    cutoff: Cutoff,
) -> Result<Vec<ResultRow>, CliError> {
    let points: Vec<(f64, f64, f64)> = rs
        .iter()
        .flat_map(|&r| {
            s.qrs
                .iter()
                .flat_map(move |&q| s.alpha2s.iter().map(move |&a| (r, q, a)))
        })
        .collect();
    let chunks = points
        .par_iter()
        .map(|&(r, q, a)| -> Result<Vec<ResultRow>, CliError> {
            let p = params(s, rail, r, q, a, cutoff)?;
            let c = if channel.classical() {
                Some(classical_report(&p)?)
            } else {
                None
            };
            let qr = if channel.quantum() {
                Some(quantum_report(&p)?)
            } else {
                None
            };
            Ok(rows_at(rail, (r, q, a), c, qr))
        })
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for chunk in chunks {
        rows.extend(chunk?);
    }
    Ok(rows)
}

fn sweep_plot(title: &str, rows: &[ResultRow]) -> Plot {
    let multi_alpha = rows.iter().any(|r| r.alpha2 != rows[0].alpha2);
    let mut keys: Vec<(f64, &str, Receiver, f64)> = Vec::new();
    for row in rows {
        let key = (row.q_r, row.measure, row.receiver, row.alpha2);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut qs: Vec<f64> = Vec::new();
    for row in rows {
        if !qs.contains(&row.q_r) {
            qs.push(row.q_r);
        }
    }
    let series = keys
        .iter()
        .map(|&(q, measure, rx, a)| {
            let points = rows
                .iter()
                .filter(|row| {
                    (row.q_r, row.measure, row.receiver, row.alpha2) == (q, measure, rx, a)
                })
                .map(|row| (row.r, row.value))
                .collect();
            let mut label = format!("qR={q:.4} {rx} {measure}");
            if multi_alpha {
                write!(label, " a2={a}").unwrap();
            }
            let qi = qs.iter().position(|&x| x == q).unwrap();
            Series {
                label,
                points,
                color: PALETTE[qi % PALETTE.len()],
                dashed: rx == Receiver::AntiRob,
            }
        })
        .collect();
    Plot {
        title: title.into(),
        x_label: "squeezing r".into(),
        y_label: "bits".into(),
        series,
    }
}

fn companion_svg(out: &Path) -> PathBuf {
    out.with_extension("svg")
}

/// Writes CSV and/or SVG per `--format`; returns what goes to stdout.
fn emit(s: &Settings, csv: String, svg: impl FnOnce() -> String) -> Result<String, CliError> {
    match (&s.out, s.format.csv(), s.format.svg()) {
        (None, true, true) => Err(CliError::Usage("--format both needs --out".into())),
        (None, true, false) => Ok(csv),
        (None, false, _) => Ok(svg()),
        (Some(path), want_csv, want_svg) => {
            if want_csv {
                write_file(path, &csv)?;
                if want_svg {
                    write_file(&companion_svg(path), &svg())?;
                }
            } else {
                write_file(path, &svg())?;
            }
            Ok(String::new())
        }
    }
}

pub fn sweep(s: &Settings) -> Result<String, CliError> {
    let rows = evaluate_grid(s, s.rail, s.channel, &s.rs, s.cutoff)?;
    let title = format!("{}-rail channel", s.rail);
    emit(s, sweep_csv(&rows), || sweep_plot(&title, &rows).render())
}

fn opt_config(s: &Settings, cutoff: Cutoff) -> OptConfig {
    OptConfig {
        tol: s.tol,
        cutoff,
        ..OptConfig::default()
    }
}

fn curve_plots(title: &str, curves: &[&[OptResult]]) -> (Plot, Plot) {
    let mut values = Vec::new();
    let mut params = Vec::new();
    for (k, curve) in curves.iter().enumerate() {
        let Some(first) = curve.first() else { continue };
        let tag = format!("{}-rail", first.rail);
        let pick = |f: fn(&OptResult) -> f64| curve.iter().map(|o| (o.r, f(o))).collect::<Vec<_>>();
        values.push(Series {
            label: format!("{tag} {}", first.measure),
            points: pick(|o| o.value),
            color: PALETTE[k % PALETTE.len()],
            dashed: false,
        });
        params.push(Series {
            label: format!("{tag} alpha2"),
            points: pick(|o| o.alpha2_opt),
            color: PALETTE[k % PALETTE.len()],
            dashed: false,
        });
        params.push(Series {
            label: format!("{tag} qR"),
            points: pick(|o| o.q_r_opt),
            color: PALETTE[k % PALETTE.len()],
            dashed: true,
        });
    }
    (
        Plot {
            title: format!("{title}: optimal value"),
            x_label: "squeezing r".into(),
            y_label: "bits".into(),
            series: values,
        },
        Plot {
            title: format!("{title}: optimal parameters"),
            x_label: "squeezing r".into(),
            y_label: "alpha2, qR".into(),
            series: params,
        },
    )
}

pub fn optimize(s: &Settings) -> Result<String, CliError> {
    let curve = optimal_curve(
        s.measure,
        s.rail,
        s.receiver,
        &s.rs,
        &opt_config(s, s.cutoff),
    )?;
    let title = format!("optimized {} for {}", s.measure, s.receiver);
    emit(s, optimize_csv(&curve), || {
        let (mut value, params) = curve_plots(&title, &[&curve]);
        value.title = title.clone();
        value.y_label = "bits, alpha2, qR".into();
        value.series.extend(params.series);
        value.render()
    })
}

pub fn figures(s: &Settings) -> Result<String, CliError> {
    let dir = s.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let cutoff = if s.explicit.nmax {
        s.cutoff
    } else {
        Cutoff::Auto {
            cap: cutoff_cap()?.unwrap_or(FIGURE_CAP),
        }
    };
    let range = |default: &str| -> Result<Vec<f64>, CliError> {
        if s.explicit.r {
            Ok(s.rs.clone())
        } else {
            parse_range(default)
        }
    };
    let sweep_r = [
        (Rail::Single, range("0:2.5:0.1")?),
        (Rail::Dual, range("0:1.2:0.05")?),
    ];
    let mut log = String::new();

    for (k, (channel, measure, name)) in [
        (Channel::Classical, "holevo", "Holevo information"),
        (Channel::Quantum, "cohinfo", "coherent information"),
    ]
    .into_iter()
    .enumerate()
    {
        for (j, (rail, rs)) in sweep_r.iter().enumerate() {
            let fig = format!("fig{}", 2 * k + j + 1);
            eprintln!("{fig}: {name}, {rail} rail, {} points in r", rs.len());
            let rows: Vec<ResultRow> = evaluate_grid(s, *rail, channel, rs, cutoff)?
                .into_iter()
                .filter(|row| row.measure == measure)
                .collect();
            write_file(&dir.join(format!("{fig}.csv")), &sweep_csv(&rows))?;
            let plot = sweep_plot(&format!("{name}, {rail} rail"), &rows);
            write_file(&dir.join(format!("{fig}.svg")), &plot.render())?;
            writeln!(log, "{}", dir.join(format!("{fig}.svg")).display()).unwrap();
        }
    }

    let cfg = opt_config(s, cutoff);
    let mut curves = Vec::new();
    for (rail, default) in [(Rail::Single, "0:2.5:0.25"), (Rail::Dual, "0:1:0.2")] {
        let rs = range(default)?;
        eprintln!(
            "fig5/fig6: optimizing holevo, {rail} rail, {} points in r",
            rs.len()
        );
        curves.push(optimal_curve(
            Measure::Holevo,
            rail,
            Receiver::Rob,
            &rs,
            &cfg,
        )?);
    }
    let all: Vec<OptResult> = curves.iter().flatten().copied().collect();
    let (value, params) = curve_plots("Holevo information", &[&curves[0], &curves[1]]);
    for (fig, plot) in [("fig5", value), ("fig6", params)] {
        write_file(&dir.join(format!("{fig}.csv")), &optimize_csv(&all))?;
        write_file(&dir.join(format!("{fig}.svg")), &plot.render())?;
        writeln!(log, "{}", dir.join(format!("{fig}.svg")).display()).unwrap();
    }
    Ok(log)
}
