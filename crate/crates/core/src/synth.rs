//! Synthetic data generation with known coefficients, and the Monte
//! Carlo harness built on it.
//!
//! [`generate`] plants the productivity equation
//! p = a0 + a1*q + a2*cq + a3*fq + a4*conc + alpha_i + eps at the
//! growth-rate level, then integrates the implied log growth into
//! positive level series so that running the ordinary ingestion pipeline
//! on the levels reproduces the planted growth panel bit for bit. Every
//! draw comes from ChaCha8 seeded with the config's 64-bit seed, so a
//! config identifies its dataset exactly, on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::panel::{growth_rates, GrowthPanel, LevelObservation, PanelDataset, Var, ALL_SECTORS};
use crate::verdoorn::{fit_model, Equation, ModelSpec, Term};

/// The one real sector every generated dataset contains, alongside its
/// all-sectors duplicate.
pub const SYNTH_SECTOR: &str = "s01";

/// First year of every generated level series.
const BASE_YEAR: i32 = 2000;

/// Starting level for gva and employment.
const BASE_LEVEL: f64 = 100.0;

/// Parameters of the planted data-generating process.
///
/// `a1` is the planted coefficient on output growth; `a0` the intercept;
/// `a2`, `a3`, `a4` the coefficients on the investment ratio, outflow
/// ratio, and employment concentration. `sigma_entity` spreads the
/// per-entity effect alpha_i, `sigma_noise` the per-observation shock.
/// Output growth itself is drawn as
/// q = q_mean + effect_q_loading * alpha_i + q_sd * z, so a positive
/// loading correlates the regressor with the entity effect (the
/// fixed-effects world where pooled OLS is biased) while zero keeps them
/// independent (the random-effects world GLS is built for).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgpConfig {
    pub n_entities: usize,
    pub n_intervals: usize,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub sigma_entity: f64,
    pub sigma_noise: f64,
    pub q_mean: f64,
    pub q_sd: f64,
    pub effect_q_loading: f64,
    pub seed: u64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        DgpConfig {
            n_entities: 5,
            n_intervals: 4,
            a0: 0.01,
            a1: 0.7,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            sigma_entity: 0.0,
            sigma_noise: 0.01,
            q_mean: 0.03,
            q_sd: 0.02,
            effect_q_loading: 0.0,
            seed: 1,
        }
    }
}

impl DgpConfig {
    fn validate(&self) -> Result<()> {
        if self.n_entities < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 entities, got {}",
                self.n_entities
            )));
        }
        if self.n_intervals < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 intervals, got {}",
                self.n_intervals
            )));
        }
        for (name, value) in [
            ("sigma_entity", self.sigma_entity),
            ("sigma_noise", self.sigma_noise),
            ("q_sd", self.q_sd),
        ] {
            if value.is_nan() || value < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("a0", self.a0),
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("a4", self.a4),
            ("q_mean", self.q_mean),
            ("effect_q_loading", self.effect_q_loading),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Derives the seed for one Monte Carlo replication from the base seed.
/// Replication 0 reuses the base seed; later replications xor in the
/// index spread by the 64-bit golden-ratio constant, so consecutive
/// indices land far apart in seed space.
pub fn replication_seed(base: u64, replication: u64) -> u64 {
    base ^ replication.wrapping_mul(0x9E3779B97F4A7C15)
}

fn region_name(index: usize, n_entities: usize) -> String {
    let width = n_entities.to_string().len().max(2);
    format!("r{:0width$}", index + 1)
}

/// Iteration cap for the concentration fixed point.
const CONC_MAX_ITER: usize = 200;
const CONC_TOL: f64 = 1e-14;

/// Generates the level dataset and the growth panel it implies.
///
/// The returned panel is literally [`growth_rates`] applied to the
/// returned levels, so the round trip is exact by construction. It
/// contains the real sector plus the all-sectors duplicate; restrict to
/// [`SYNTH_SECTOR`] before fitting.
///
/// With `a4` nonzero the planted equation feeds concentration back into
/// employment, which defines concentration. Each year is resolved by
/// fixed-point iteration on the shares; the iteration diverging is an
/// InvalidConfig error (the feedback coefficient is too strong).
pub fn generate(config: &DgpConfig) -> Result<(PanelDataset, GrowthPanel)> {
    config.validate()?;
    let n = config.n_entities;
    let t_len = config.n_intervals;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // Entity effects first, then interval draws in (interval, entity)
    // order. Sigmas scale the draws rather than gating them, so turning
    // a variance off never shifts the rest of the stream.
    let mut alpha = Vec::with_capacity(n);
    for _ in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        alpha.push(config.sigma_entity * z);
    }
    let mut q = vec![vec![0.0; n]; t_len];
    let mut eps = vec![vec![0.0; n]; t_len];
    let mut cq = vec![vec![0.0; n]; t_len];
    let mut fq = vec![vec![0.0; n]; t_len];
    for t in 0..t_len {
        for i in 0..n {
            let z_q: f64 = rng.sample(StandardNormal);
            let z_e: f64 = rng.sample(StandardNormal);
            let z_cq: f64 = rng.sample(StandardNormal);
            let z_fq: f64 = rng.sample(StandardNormal);
            q[t][i] = config.q_mean + config.effect_q_loading * alpha[i] + config.q_sd * z_q;
            eps[t][i] = config.sigma_noise * z_e;
            cq[t][i] = (0.2 + 0.05 * z_cq).max(0.01);
            fq[t][i] = (0.3 + 0.05 * z_fq).max(0.01);
        }
    }

    let mut gva = vec![BASE_LEVEL; n];
    let mut employment = vec![BASE_LEVEL; n];
    let mut observations = Vec::with_capacity(2 * n * (t_len + 1));
    let mut push_year = |gva: &[f64], emp: &[f64], gfcf: &[f64], out: &[f64], year: i32| {
        for i in 0..n {
            let region = region_name(i, n);
            for sector in [ALL_SECTORS, SYNTH_SECTOR] {
                observations.push(LevelObservation {
                    region: region.clone(),
                    sector: sector.to_string(),
                    year,
                    gva: gva[i],
                    employment: emp[i],
                    gfcf: gfcf[i],
                    outflow: out[i],
                });
            }
        }
    };

    let base_gfcf: Vec<f64> = gva.iter().map(|g| 0.2 * g).collect();
    let base_out: Vec<f64> = gva.iter().map(|g| 0.3 * g).collect();
    push_year(&gva, &employment, &base_gfcf, &base_out, BASE_YEAR);

    for t in 0..t_len {
        let next_gva: Vec<f64> = (0..n).map(|i| gva[i] * q[t][i].exp()).collect();

        // Everything in p except the concentration term.
        let partial: Vec<f64> = (0..n)
            .map(|i| {
                config.a0
                    + config.a1 * q[t][i]
                    + config.a2 * cq[t][i]
                    + config.a3 * fq[t][i]
                    + alpha[i]
                    + eps[t][i]
            })
            .collect();

        let employment_for = |conc: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let p = partial[i] + config.a4 * conc[i];
                    let e = q[t][i] - p;
                    employment[i] * e.exp()
                })
                .collect()
        };
        let shares_of = |emp: &[f64]| -> Vec<f64> {
            let total: f64 = emp.iter().sum();
            emp.iter().map(|v| v / total).collect()
        };

        let prev_total: f64 = employment.iter().sum();
        let mut conc: Vec<f64> = employment.iter().map(|v| v / prev_total).collect();
        let next_emp = if config.a4 == 0.0 {
            employment_for(&conc)
        } else {
            let mut emp = employment_for(&conc);
            let mut converged = false;
            for _ in 0..CONC_MAX_ITER {
                let next_conc = shares_of(&emp);
                let gap = conc
                    .iter()
                    .zip(&next_conc)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                conc = next_conc;
                emp = employment_for(&conc);
                if gap < CONC_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::InvalidConfig(format!(
                    "concentration feedback a4 = {} does not settle; weaken it",
                    config.a4
                )));
            }
            emp
        };

        let gfcf: Vec<f64> = (0..n).map(|i| cq[t][i] * next_gva[i]).collect();
        let outflow: Vec<f64> = (0..n).map(|i| fq[t][i] * next_gva[i]).collect();
        gva = next_gva;
        employment = next_emp;
        push_year(&gva, &employment, &gfcf, &outflow, BASE_YEAR + 1 + t as i32);
    }

    let dataset = PanelDataset::new(observations);
    let planted = growth_rates(&dataset)?;
    Ok((dataset, planted))
}

/// Summary of one coefficient across replications.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSummary {
    pub term: Term,
    /// The planted value, when the fitted specification actually
    /// estimates it.
    pub truth: Option<f64>,
    pub mean: f64,
    /// Sample standard deviation across replications; zero for a single
    /// replication.
    pub sd: f64,
    /// mean - truth, when the truth is known.
    pub bias: Option<f64>,
}

/// Monte Carlo summary: per-term statistics over all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub replications: usize,
    pub terms: Vec<TermSummary>,
}

impl McSummary {
    pub fn term(&self, term: Term) -> Option<&TermSummary> {
        self.terms.iter().find(|t| t.term == term)
    }
}

/// The planted value a fitted term estimates, if the specification is
/// correctly specified for it. The employment-growth equation inherits
/// -a0 and 1 - a1 from p = q - e, but only while the ratio terms are
/// absent from the DGP; a productivity regression that omits active
/// ratio regressors has no clean truth either, so those cases report
/// none.
fn planted_truth(config: &DgpConfig, equation: Equation, term: Term) -> Option<f64> {
    let ratios_off = config.a2 == 0.0 && config.a3 == 0.0 && config.a4 == 0.0;
    match (equation, term) {
        (Equation::Augmented, Term::Constant) => Some(config.a0),
        (Equation::Augmented, Term::Regressor(Var::Q)) => Some(config.a1),
        (Equation::Augmented, Term::Regressor(Var::Cq)) => Some(config.a2),
        (Equation::Augmented, Term::Regressor(Var::Fq)) => Some(config.a3),
        (Equation::Augmented, Term::Regressor(Var::Conc)) => Some(config.a4),
        (Equation::Verdoorn, Term::Constant) if ratios_off => Some(config.a0),
        (Equation::Verdoorn, Term::Regressor(Var::Q)) if ratios_off => Some(config.a1),
        (Equation::Kaldor, Term::Constant) if ratios_off => Some(-config.a0),
        (Equation::Kaldor, Term::Regressor(Var::Q)) if ratios_off => Some(1.0 - config.a1),
        _ => None,
    }
}

/// Runs `generate` + `fit_model` for each replication, with seeds
/// derived by [`replication_seed`], and summarizes every coefficient.
/// Replications are independent given their seeds; the summary does not
/// depend on evaluation order.
pub fn monte_carlo(config: &DgpConfig, spec: &ModelSpec, replications: usize) -> Result<McSummary> {
    if replications == 0 {
        return Err(Error::InvalidConfig(
            "need at least one replication".to_string(),
        ));
    }
    let mut estimates: Vec<Vec<f64>> = Vec::new();
    let mut terms: Vec<Term> = Vec::new();
    for rep in 0..replications {
        let rep_config = DgpConfig {
            seed: replication_seed(config.seed, rep as u64),
            ..*config
        };
        let (_, planted) = generate(&rep_config)?;
        let fit = fit_model(&planted, spec)?;
        if rep == 0 {
            terms = fit.coefficients.iter().map(|c| c.term).collect();
            estimates = vec![Vec::with_capacity(replications); terms.len()];
        }
        for (j, c) in fit.coefficients.iter().enumerate() {
            estimates[j].push(c.estimate);
        }
    }

    let summaries = terms
        .iter()
        .zip(&estimates)
        .map(|(&term, values)| {
            let nf = values.len() as f64;
            let mean = values.iter().sum::<f64>() / nf;
            let sd = if values.len() < 2 {
                0.0
            } else {
                let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
                (ss / (nf - 1.0)).sqrt()
            };
            let truth = planted_truth(config, spec.equation, term);
            TermSummary {
                term,
                truth,
                mean,
                sd,
                bias: truth.map(|t| mean - t),
            }
        })
        .collect();

    Ok(McSummary {
        replications,
        terms: summaries,
    })
}
