//! The panel data model: level observations, balance validation, and
//! construction of the derived regression variables (growth rates, the
//! investment and outflow ratios, and employment concentration).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Sector label reserved for a region's total-economy row. Ratio
/// construction reads its outflow and value-added denominators from this
/// row; regional (by-region) analyses never treat it as one of the
/// sectors.
pub const ALL_SECTORS: &str = "all_sectors";

/// One (region, sector, year) cell of the level panel.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelObservation {
    pub region: String,
    pub sector: String,
    pub year: i32,
    /// Gross value added, currency units. Must be positive.
    pub gva: f64,
    /// Employed persons. Must be positive.
    pub employment: f64,
    /// Gross fixed capital formation, currency units. Must be
    /// non-negative.
    pub gfcf: f64,
    /// Flow of goods out of the region, currency units. Must be
    /// non-negative. Only the all-sectors row's value enters the derived
    /// outflow ratio.
    pub outflow: f64,
}

/// A collection of level observations, expected to form a balanced
/// region x sector x year panel. Use [`validate`] to check.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    pub observations: Vec<LevelObservation>,
}

impl PanelDataset {
    pub fn new(observations: Vec<LevelObservation>) -> Self {
        Self { observations }
    }

    /// Region names in first-appearance order.
    pub fn regions(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for o in &self.observations {
            if !seen.contains(&o.region) {
                seen.push(o.region.clone());
            }
        }
        seen
    }

    /// Sector names in first-appearance order.
    pub fn sectors(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for o in &self.observations {
            if !seen.contains(&o.sector) {
                seen.push(o.sector.clone());
            }
        }
        seen
    }

    /// Distinct years, ascending.
    pub fn years(&self) -> Vec<i32> {
        let mut ys: Vec<i32> = self.observations.iter().map(|o| o.year).collect();
        ys.sort_unstable();
        ys.dedup();
        ys
    }

    /// First observation per (region, sector, year); duplicates are a
    /// validation defect and are ignored here.
    fn cell_index(&self) -> HashMap<(&str, &str, i32), &LevelObservation> {
        let mut idx = HashMap::with_capacity(self.observations.len());
        for o in &self.observations {
            idx.entry((o.region.as_str(), o.sector.as_str(), o.year))
                .or_insert(o);
        }
        idx
    }
}

/// A single violated invariant of a [`PanelDataset`]. Defects are data,
/// not faults: validation reports all of them instead of stopping at the
/// first.
#[derive(Debug, Clone, PartialEq)]
pub enum Defect {
    MissingCell {
        region: String,
        sector: String,
        year: i32,
    },
    DuplicateCell {
        region: String,
        sector: String,
        year: i32,
    },
    NonPositiveLevel {
        region: String,
        sector: String,
        year: i32,
        field: &'static str,
        value: f64,
    },
    NegativeValue {
        region: String,
        sector: String,
        year: i32,
        field: &'static str,
        value: f64,
    },
    NonFiniteValue {
        region: String,
        sector: String,
        year: i32,
        field: &'static str,
    },
    YearGap {
        missing_year: i32,
    },
    TooFewYears {
        count: usize,
    },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::MissingCell {
                region,
                sector,
                year,
            } => {
                write!(f, "missing cell ({region}, {sector}, {year})")
            }
            Defect::DuplicateCell {
                region,
                sector,
                year,
            } => {
                write!(f, "duplicate cell ({region}, {sector}, {year})")
            }
            Defect::NonPositiveLevel {
                region,
                sector,
                year,
                field,
                value,
            } => {
                write!(
                    f,
                    "non-positive {field} = {value} at ({region}, {sector}, {year})"
                )
            }
            Defect::NegativeValue {
                region,
                sector,
                year,
                field,
                value,
            } => {
                write!(
                    f,
                    "negative {field} = {value} at ({region}, {sector}, {year})"
                )
            }
            Defect::NonFiniteValue {
                region,
                sector,
                year,
                field,
            } => {
                write!(f, "non-finite {field} at ({region}, {sector}, {year})")
            }
            Defect::YearGap { missing_year } => {
                write!(f, "year range not contiguous: {missing_year} is missing")
            }
            Defect::TooFewYears { count } => {
                write!(f, "panel spans {count} year(s); at least 2 are required")
            }
        }
    }
}

/// Checks every dataset invariant and returns the full list of defects:
/// at least two contiguous years, finite values, positive gva and
/// employment, non-negative gfcf and outflow, and exact balance over the
/// region x sector x year cross-product.
pub fn validate(dataset: &PanelDataset) -> Vec<Defect> {
    let mut defects = Vec::new();

    let years = dataset.years();
    if years.len() < 2 {
        defects.push(Defect::TooFewYears { count: years.len() });
    }
    for w in years.windows(2) {
        for missing in (w[0] + 1)..w[1] {
            defects.push(Defect::YearGap {
                missing_year: missing,
            });
        }
    }

    for o in &dataset.observations {
        let fields: [(&'static str, f64); 4] = [
            ("gva", o.gva),
            ("employment", o.employment),
            ("gfcf", o.gfcf),
            ("outflow", o.outflow),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                defects.push(Defect::NonFiniteValue {
                    region: o.region.clone(),
                    sector: o.sector.clone(),
                    year: o.year,
                    field,
                });
            }
        }
        for (field, value) in [("gva", o.gva), ("employment", o.employment)] {
            if value.is_finite() && value <= 0.0 {
                defects.push(Defect::NonPositiveLevel {
                    region: o.region.clone(),
                    sector: o.sector.clone(),
                    year: o.year,
                    field,
                    value,
                });
            }
        }
        for (field, value) in [("gfcf", o.gfcf), ("outflow", o.outflow)] {
            if value.is_finite() && value < 0.0 {
                defects.push(Defect::NegativeValue {
                    region: o.region.clone(),
                    sector: o.sector.clone(),
                    year: o.year,
                    field,
                    value,
                });
            }
        }
    }

    let mut counts: BTreeMap<(&str, &str, i32), usize> = BTreeMap::new();
    for o in &dataset.observations {
        *counts
            .entry((o.region.as_str(), o.sector.as_str(), o.year))
            .or_insert(0) += 1;
    }
    for (&(region, sector, year), &n) in &counts {
        if n > 1 {
            defects.push(Defect::DuplicateCell {
                region: region.to_string(),
                sector: sector.to_string(),
                year,
            });
        }
    }
    for region in dataset.regions() {
        for sector in dataset.sectors() {
            for &year in &years {
                if !counts.contains_key(&(region.as_str(), sector.as_str(), year)) {
                    defects.push(Defect::MissingCell {
                        region: region.clone(),
                        sector: sector.clone(),
                        year,
                    });
                }
            }
        }
    }

    defects
}

/// One derived observation: growth rates over the interval ending at
/// `interval_end_year`, with the ratio regressors taken at that end year.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthObservation {
    pub region: String,
    pub sector: String,
    pub interval_end_year: i32,
    /// Labour-productivity growth, per-year log difference; equals q - e
    /// by construction.
    pub p: f64,
    /// Output growth, per-year log difference of gva.
    pub q: f64,
    /// Employment growth, per-year log difference.
    pub e: f64,
    /// Investment ratio gfcf/gva of the cell.
    pub cq: f64,
    /// Outflow ratio: the region's goods outflow over the region's
    /// all-sectors gva.
    pub fq: f64,
    /// The region's share of economy-wide sectoral employment, in (0, 1].
    pub conc: f64,
}

/// A derived regression variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    P,
    Q,
    E,
    Cq,
    Fq,
    Conc,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::E => "e",
            Var::Cq => "cq",
            Var::Fq => "fq",
            Var::Conc => "conc",
        }
    }
}

impl GrowthObservation {
    pub fn value(&self, var: Var) -> f64 {
        match var {
            Var::P => self.p,
            Var::Q => self.q,
            Var::E => self.e,
            Var::Cq => self.cq,
            Var::Fq => self.fq,
            Var::Conc => self.conc,
        }
    }

    fn with_values(&self, values: [f64; 6], interval_end_year: i32) -> GrowthObservation {
        GrowthObservation {
            region: self.region.clone(),
            sector: self.sector.clone(),
            interval_end_year,
            p: values[0],
            q: values[1],
            e: values[2],
            cq: values[3],
            fq: values[4],
            conc: values[5],
        }
    }
}

/// Which slice of the panel an analysis runs on, and with it the entity
/// definition: a by-sector analysis compares regions within one sector,
/// a by-region analysis compares sectors within one region (excluding the
/// all-sectors aggregate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grouping {
    BySector(String),
    ByRegion(String),
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grouping::BySector(s) => write!(f, "sector {s}"),
            Grouping::ByRegion(r) => write!(f, "region {r}"),
        }
    }
}

/// The derived panel of growth observations. Each (region, sector) pair
/// is one time series; estimators treat those pairs as entities, which
/// after restriction by a [`Grouping`] coincide with regions (by sector)
/// or sectors (by region).
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthPanel {
    pub rows: Vec<GrowthObservation>,
}

impl GrowthPanel {
    /// The subset of rows an analysis grouping selects. By-region
    /// restrictions drop the all-sectors aggregate rows.
    pub fn restrict(&self, grouping: &Grouping) -> Result<GrowthPanel> {
        let rows: Vec<GrowthObservation> = match grouping {
            Grouping::BySector(sector) => self
                .rows
                .iter()
                .filter(|r| &r.sector == sector)
                .cloned()
                .collect(),
            Grouping::ByRegion(region) => self
                .rows
                .iter()
                .filter(|r| &r.region == region && r.sector != ALL_SECTORS)
                .cloned()
                .collect(),
        };
        if rows.is_empty() {
            return Err(Error::UnknownGroup(format!(
                "no observations for {grouping}"
            )));
        }
        Ok(GrowthPanel { rows })
    }

    /// Distinct (region, sector) entities, sorted.
    pub fn entities(&self) -> Vec<(String, String)> {
        let mut es: Vec<(String, String)> = self
            .rows
            .iter()
            .map(|r| (r.region.clone(), r.sector.clone()))
            .collect();
        es.sort();
        es.dedup();
        es
    }

    /// Rows sorted by (region, sector, year), the order every estimator
    /// and the Durbin-Watson statistic use.
    pub fn canonical(&self) -> GrowthPanel {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| {
            (&a.region, &a.sector, a.interval_end_year).cmp(&(
                &b.region,
                &b.sector,
                b.interval_end_year,
            ))
        });
        GrowthPanel { rows }
    }
}

/// The ratio regressors of one cell: (cq, fq, conc).
///
/// cq is gfcf/gva of the cell itself. fq divides the region's goods
/// outflow by the region's all-sectors gva, both read from the
/// all-sectors row, so it is identical across the sectors of a
/// region-year. conc is the cell's employment share in the same sector's
/// employment summed over every region.
pub fn build_ratios(
    dataset: &PanelDataset,
    region: &str,
    sector: &str,
    year: i32,
) -> Result<(f64, f64, f64)> {
    let idx = dataset.cell_index();
    let cell = idx.get(&(region, sector, year)).ok_or(Error::MissingCell {
        region: region.to_string(),
        sector: sector.to_string(),
        year,
    })?;
    let all = idx
        .get(&(region, ALL_SECTORS, year))
        .ok_or(Error::MissingCell {
            region: region.to_string(),
            sector: ALL_SECTORS.to_string(),
            year,
        })?;

    if cell.gva == 0.0 {
        return Err(Error::ZeroDenominator(format!(
            "gva of ({region}, {sector}, {year}) is zero"
        )));
    }
    let cq = cell.gfcf / cell.gva;

    if all.gva == 0.0 {
        return Err(Error::ZeroDenominator(format!(
            "all-sectors gva of ({region}, {year}) is zero"
        )));
    }
    let fq = all.outflow / all.gva;

    let mut regions = dataset.regions();
    regions.sort();
    let mut total_employment = 0.0;
    for r in &regions {
        let other = idx
            .get(&(r.as_str(), sector, year))
            .ok_or(Error::MissingCell {
                region: r.clone(),
                sector: sector.to_string(),
                year,
            })?;
        total_employment += other.employment;
    }
    if total_employment == 0.0 {
        return Err(Error::ZeroDenominator(format!(
            "economy-wide employment of ({sector}, {year}) is zero"
        )));
    }
    let conc = cell.employment / total_employment;

    Ok((cq, fq, conc))
}

/// Derives the growth panel from a valid level dataset: per-year natural
/// log differences q, e and p = q - e for every (region, sector) series
/// and consecutive year pair, with the ratio regressors evaluated at each
/// interval's end year. Output rows are in canonical (region, sector,
/// year) order.
pub fn growth_rates(dataset: &PanelDataset) -> Result<GrowthPanel> {
    let defects = validate(dataset);
    if !defects.is_empty() {
        if let Some(d) = defects.iter().find(|d| {
            matches!(
                d,
                Defect::NonPositiveLevel { .. }
                    | Defect::NegativeValue { .. }
                    | Defect::NonFiniteValue { .. }
            )
        }) {
            return Err(Error::InvalidLevels(d.to_string()));
        }
        if let Some(d) = defects
            .iter()
            .find(|d| matches!(d, Defect::TooFewYears { .. }))
        {
            return Err(Error::InsufficientIntervals(d.to_string()));
        }
        return Err(Error::UnbalancedPanel(defects[0].to_string()));
    }

    let idx = dataset.cell_index();
    let mut regions = dataset.regions();
    regions.sort();
    let mut sectors = dataset.sectors();
    sectors.sort();
    let years = dataset.years();

    let mut rows = Vec::new();
    for region in &regions {
        for sector in &sectors {
            for w in years.windows(2) {
                let (y0, y1) = (w[0], w[1]);
                let prev = idx[&(region.as_str(), sector.as_str(), y0)];
                let curr = idx[&(region.as_str(), sector.as_str(), y1)];
                let q = curr.gva.ln() - prev.gva.ln();
                let e = curr.employment.ln() - prev.employment.ln();
                let p = q - e;
                let (cq, fq, conc) = build_ratios(dataset, region, sector, y1)?;
                rows.push(GrowthObservation {
                    region: region.clone(),
                    sector: sector.clone(),
                    interval_end_year: y1,
                    p,
                    q,
                    e,
                    cq,
                    fq,
                    conc,
                });
            }
        }
    }
    Ok(GrowthPanel { rows })
}

/// Replaces every variable by its within-entity difference across
/// consecutive intervals, annihilating entity-constant additive effects.
/// Each differenced row keeps the later interval's end year; every entity
/// loses one interval.
pub fn first_difference(panel: &GrowthPanel) -> Result<GrowthPanel> {
    let mut by_entity: BTreeMap<(&str, &str), Vec<&GrowthObservation>> = BTreeMap::new();
    for row in &panel.rows {
        by_entity
            .entry((row.region.as_str(), row.sector.as_str()))
            .or_default()
            .push(row);
    }

    let mut rows = Vec::new();
    for ((region, sector), mut series) in by_entity {
        series.sort_by_key(|r| r.interval_end_year);
        for w in series.windows(2) {
            if w[0].interval_end_year == w[1].interval_end_year {
                return Err(Error::UnbalancedPanel(format!(
                    "duplicate interval {} for entity ({region}, {sector})",
                    w[0].interval_end_year
                )));
            }
        }
        if series.len() < 2 {
            return Err(Error::InsufficientIntervals(format!(
                "entity ({region}, {sector}) has {} interval(s); differencing needs at least 2",
                series.len()
            )));
        }
        for w in series.windows(2) {
            let (prev, curr) = (w[0], w[1]);
            let values = [
                curr.p - prev.p,
                curr.q - prev.q,
                curr.e - prev.e,
                curr.cq - prev.cq,
                curr.fq - prev.fq,
                curr.conc - prev.conc,
            ];
            rows.push(curr.with_values(values, curr.interval_end_year));
        }
    }
    Ok(GrowthPanel { rows })
}
