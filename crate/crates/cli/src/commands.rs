use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use semiclass::action::{action_only, classical_average, kinetic_cl};
use semiclass::io::{Cell, Table};
use semiclass::langer::eigenfunction;
use semiclass::oracle::{self, OracleSpectrum};
use semiclass::potential::WellEdges;
use semiclass::quantize::{
    bs_levels, disc_levels, halfline_levels, jump_phase, jump_point, weyl_count, SemiclassicalLevel,
};
use semiclass::scaling::loglog_slope;
use semiclass::Result;

use crate::config::{Geometry, Quantity, Run};

/// A table plus diagnostic lines for stderr.
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

fn semiclassical(run: &Run, hbar: f64) -> Result<Vec<SemiclassicalLevel>> {
    let (pot, window) = (&run.potential, run.config.window);
    match run.geometry {
        Geometry::Smooth => bs_levels(pot, window, hbar),
        Geometry::Jump => disc_levels(pot, window, hbar),
        Geometry::HalfLine(bc) => halfline_levels(pot, window, hbar, bc),
    }
}

fn spectrum(run: &Run, hbar: f64) -> Result<Option<OracleSpectrum>> {
    if !run.config.oracle.enabled {
        return Ok(None);
    }
    oracle::solve_spectrum(&run.potential, hbar, run.config.window, &run.oracle_options()).map(Some)
}

/// Position of level `n` in the oracle spectrum.
fn slot(spec: &OracleSpectrum, n: u32) -> Option<usize> {
    (n as usize).checked_sub(spec.first_index).filter(|k| *k < spec.len())
}

/// Mismatch of the quantization condition at `lambda`, in action units.
fn residual(run: &Run, n: u32, hbar: f64, lambda: f64) -> Result<f64> {
    let pot = &run.potential;
    let n = f64::from(n);
    Ok(match run.geometry {
        Geometry::Smooth => (action_only(pot, lambda)? - PI * hbar * (n + 0.5)).abs(),
        Geometry::HalfLine(bc) => (action_only(pot, lambda)? - PI * hbar * (n + bc.offset())).abs(),
        Geometry::Jump => {
            let j = jump_phase(pot, jump_point(pot)?, lambda, hbar)?;
            hbar * (j.total_phase() - (n + 1.0) * PI).abs()
        }
    })
}

/// Semiclassical and oracle values joined on the quantum number.
struct Joined {
    n: u32,
    level: Option<SemiclassicalLevel>,
    oracle: Option<(f64, f64)>,
}

fn join(run: &Run, levels: &[SemiclassicalLevel], spec: Option<&OracleSpectrum>) -> Vec<Joined> {
    let mut rows: BTreeMap<u32, Joined> = BTreeMap::new();
    for l in levels {
        rows.insert(
            l.n,
            Joined {
                n: l.n,
                level: Some(*l),
                oracle: None,
            },
        );
    }
    if let Some(s) = spec {
        for (i, (lam, err)) in s.indices().zip(s.eigenvalues.iter().zip(&s.est_error)) {
            let n = i as u32;
            rows.entry(n)
                .or_insert(Joined {
                    n,
                    level: None,
                    oracle: None,
                })
                .oracle = Some((*lam, *err));
        }
    }
    rows.into_values().filter(|r| run.config.levels.keeps(r.n)).collect()
}

fn per_hbar<T: Send>(run: &Run, f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    run.config.hbar.par_iter().map(|&h| f(h)).collect()
}

pub fn levels(run: &Run) -> Result<Report> {
    let mut table = Table::new([
        "hbar",
        "n",
        "lambda_sc",
        "lambda_oracle",
        "delta",
        "oracle_error",
        "residual",
        "kind",
    ]);
    let blocks = per_hbar(run, |hbar| {
        let levels = semiclassical(run, hbar)?;
        let spec = spectrum(run, hbar)?;
        let mut rows = Vec::new();
        for j in join(run, &levels, spec.as_ref()) {
            let sc = j.level.map(|l| l.lambda);
            let or = j.oracle.map(|o| o.0);
            let delta = sc.zip(or).map(|(a, b)| a - b);
            let res = or.map(|l| residual(run, j.n, hbar, l)).transpose()?;
            let kind = j.level.map_or(Cell::Empty, |l| l.kind.label().into());
            rows.push(vec![
                hbar.into(),
                j.n.into(),
                sc.into(),
                or.into(),
                delta.into(),
                j.oracle.map(|o| o.1).into(),
                res.into(),
                kind,
            ]);
        }
        Ok(rows)
    })?;
    table.rows = blocks.into_iter().flatten().collect();
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}

pub fn count(run: &Run) -> Result<Report> {
    let (lo, hi) = run.config.window;
    let mut table = Table::new([
        "hbar",
        "lo",
        "hi",
        "count",
        "predicted",
        "epsilon",
        "oracle_count",
        "oracle_epsilon",
    ]);
    let rows = per_hbar(run, |hbar| {
        let weyl = weyl_count(&run.potential, lo, hi, hbar)?;
        let count = semiclassical(run, hbar)?.len();
        let spec = spectrum(run, hbar)?;
        let oc = spec.as_ref().map(|s| s.len());
        Ok(vec![
            hbar.into(),
            lo.into(),
            hi.into(),
            count.into(),
            weyl.predicted.into(),
            (count as f64 - weyl.predicted).into(),
            oc.map_or(Cell::Empty, Cell::from),
            oc.map(|c| c as f64 - weyl.predicted).into(),
        ])
    })?;
    table.rows = rows;
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}

/// Sample abscissae covering the classically allowed region plus a margin.
fn samples(run: &Run, lambda: f64) -> Result<Vec<f64>> {
    let margin = run.config.wavefunction.margin;
    let (a, b) = match run.potential.well_edges(lambda)? {
        WellEdges::Full(t) => (t.x_minus - margin, t.x_plus + margin),
        WellEdges::Half(h) => (0.0, h.x_plus + margin),
    };
    let m = run.config.wavefunction.points - 1;
    Ok((0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect())
}

struct Profile {
    x: Vec<f64>,
    psi: Vec<f64>,
    psi_oracle: Option<Vec<f64>>,
}

impl Profile {
    /// `(sup |psi - psi_oracle|, sup |psi_oracle|)`
    fn sup_error(&self) -> Option<(f64, f64)> {
        let o = self.psi_oracle.as_ref()?;
        let err = self.psi.iter().zip(o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let peak = o.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Some((err, peak))
    }
}

fn profile(run: &Run, level: &SemiclassicalLevel, spec: Option<&OracleSpectrum>) -> Result<Profile> {
    let psi_sc = eigenfunction(&run.potential, level)?;
    let x = samples(run, level.lambda)?;
    let psi = x.iter().map(|&t| psi_sc.eval(t)).collect::<Result<Vec<_>>>()?;
    let psi_oracle = match spec.and_then(|s| slot(s, level.n).map(|k| (s, k))) {
        Some((s, k)) => {
            let g = oracle::eigenvector(s, k)?;
            let mut o: Vec<f64> = x.iter().map(|&t| g.interpolate(t)).collect();
            let overlap: f64 = o.iter().zip(&psi).map(|(a, b)| a * b).sum();
            if overlap < 0.0 {
                o.iter_mut().for_each(|v| *v = -*v);
            }
            Some(o)
        }
        None => None,
    };
    Ok(Profile { x, psi, psi_oracle })
}

fn selected(run: &Run, hbar: f64) -> Result<Vec<SemiclassicalLevel>> {
    Ok(semiclassical(run, hbar)?
        .into_iter()
        .filter(|l| run.config.levels.keeps(l.n))
        .collect())
}

pub fn wavefunction(run: &Run) -> Result<Report> {
    let mut table = Table::new(["hbar", "n", "x", "psi", "psi_oracle", "abs_err"]);
    let blocks = per_hbar(run, |hbar| {
        let spec = spectrum(run, hbar)?;
        let mut rows = Vec::new();
        let mut notes = Vec::new();
        for level in selected(run, hbar)? {
            let p = profile(run, &level, spec.as_ref())?;
            for (i, (&x, &psi)) in p.x.iter().zip(&p.psi).enumerate() {
                let o = p.psi_oracle.as_ref().map(|o| o[i]);
                rows.push(vec![
                    hbar.into(),
                    level.n.into(),
                    x.into(),
                    psi.into(),
                    o.into(),
                    o.map(|o| (psi - o).abs()).into(),
                ]);
            }
            if let Some((err, peak)) = p.sup_error() {
                notes.push(format!(
                    "hbar={hbar:?} n={} sup_error={err:?} relative={:?}",
                    level.n,
                    err / peak
                ));
            }
        }
        Ok((rows, notes))
    })?;
    let mut notes = Vec::new();
    for (rows, n) in blocks {
        table.rows.extend(rows);
        notes.extend(n);
    }
    Ok(Report { table, notes })
}

pub fn observable(run: &Run) -> Result<Report> {
    let pot = &run.potential;
    let mut table = Table::new(["hbar", "n", "weight", "lambda", "quantum", "classical", "difference"]);
    let weights: Vec<_> = run.config.weights.iter().map(|w| (w.label(), w.build(pot))).collect();
    let blocks = per_hbar(run, |hbar| {
        let spec = spectrum(run, hbar)?;
        let mut rows = Vec::new();
        for level in selected(run, hbar)? {
            let k = spec.as_ref().and_then(|s| slot(s, level.n).map(|k| (s, k)));
            let lambda = k.map_or(level.lambda, |(s, k)| s.eigenvalues[k]);
            let mut push = |label: &str, q: Option<f64>, c: f64| {
                rows.push(vec![
                    hbar.into(),
                    level.n.into(),
                    label.into(),
                    lambda.into(),
                    q.into(),
                    c.into(),
                    q.map(|q| q - c).into(),
                ]);
            };
            for (label, w) in &weights {
                let q = k.map(|(s, k)| oracle::observable(s, k, w)).transpose()?;
                push(label, q, classical_average(pot, lambda, w)?);
            }
            let q = k.map(|(s, k)| oracle::kinetic(s, k)).transpose()?;
            push("kinetic", q, kinetic_cl(pot, lambda)?);
        }
        Ok(rows)
    })?;
    table.rows = blocks.into_iter().flatten().collect();
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}

/// Exponent the theory predicts for `quantity` on this geometry.
pub fn predicted_class(quantity: Quantity, geometry: Geometry) -> &'static str {
    match (quantity, geometry) {
        (Quantity::Residual | Quantity::Eigenvalue, Geometry::Jump) => "5/3",
        (Quantity::Residual | Quantity::Eigenvalue, _) => "2",
        (Quantity::Wavefunction, _) => "2/3",
        (Quantity::Observable, _) => "1/3",
        (Quantity::Peak, _) => "-1/6",
    }
}

fn nearest(levels: Vec<SemiclassicalLevel>, energy: f64) -> Option<SemiclassicalLevel> {
    levels
        .into_iter()
        .min_by(|a, b| (a.lambda - energy).abs().total_cmp(&(b.lambda - energy).abs()))
}

/// `(n, value)` of the scaling quantity at one `hbar`.
fn measure(run: &Run, hbar: f64, spec: &OracleSpectrum) -> Result<(Option<u32>, f64)> {
    let quantity = run.config.scaling.quantity;
    let levels = selected(run, hbar)?;
    if !quantity.single_level() {
        let mut worst: f64 = 0.0;
        for j in join(run, &levels, Some(spec)) {
            let Some((or, _)) = j.oracle else { continue };
            let v = match quantity {
                Quantity::Residual => residual(run, j.n, hbar, or)?,
                _ => match j.level {
                    Some(l) => (l.lambda - or).abs(),
                    None => continue,
                },
            };
            worst = worst.max(v);
        }
        return Ok((None, worst));
    }
    let (lo, hi) = run.config.window;
    let energy = run.config.scaling.energy.unwrap_or(0.5 * (lo + hi));
    let Some(level) = nearest(levels, energy) else {
        return Ok((None, f64::NAN));
    };
    let Some(k) = slot(spec, level.n) else {
        return Ok((Some(level.n), f64::NAN));
    };
    let lambda = spec.eigenvalues[k];
    let value = match quantity {
        Quantity::Wavefunction => {
            let (err, peak) = profile(run, &level, Some(spec))?.sup_error().unwrap_or((f64::NAN, 1.0));
            err / peak
        }
        Quantity::Observable => {
            let w = run.config.weights[0].build(&run.potential);
            (oracle::observable(spec, k, &w)? - classical_average(&run.potential, lambda, &w)?).abs()
        }
        _ => {
            let g = oracle::eigenvector(spec, k)?;
            let edge = run.potential.well_edges(lambda)?.right();
            g.interpolate(edge).abs()
        }
    };
    Ok((Some(level.n), value))
}

pub fn scaling(run: &Run) -> Result<Report> {
    let quantity = run.config.scaling.quantity;
    let predicted = predicted_class(quantity, run.geometry);
    let points = per_hbar(run, |hbar| {
        let spec = spectrum(run, hbar)?.expect("scaling runs with the oracle enabled");
        measure(run, hbar, &spec).map(|(n, v)| (hbar, n, v))
    })?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.2 > 0.0 && p.2.is_finite())
        .map(|p| (p.0, p.2))
        .unzip();
    let fit = loglog_slope(&xs, &ys).ok();
    let mut table = Table::new(["quantity", "hbar", "n", "value", "slope", "predicted"]);
    for (hbar, n, v) in &points {
        table.rows.push(vec![
            quantity.label().into(),
            (*hbar).into(),
            n.map_or(Cell::Empty, Cell::from),
            (*v).into(),
            fit.map(|f| f.slope).into(),
            predicted.into(),
        ]);
    }
    let note = match fit {
        Some(f) => format!("{} slope={:?} predicted={predicted}", quantity.label(), f.slope),
        None => format!("{}: fewer than two positive values, no slope", quantity.label()),
    };
    Ok(Report {
        table,
        notes: vec![note],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(predicted_class(Quantity::Residual, Geometry::Smooth), "2");
        assert_eq!(predicted_class(Quantity::Eigenvalue, Geometry::Jump), "5/3");
        assert_eq!(predicted_class(Quantity::Observable, Geometry::Smooth), "1/3");
    }
}
