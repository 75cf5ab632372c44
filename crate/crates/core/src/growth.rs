//! Size-growth audits of reductions over generated families.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genlab::{generate, GeneratorSpec};
use crate::reductions::by_id;
use crate::size::{measure, SizeMode, SizeReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaResult {
    pub name: String,
    pub expected: u64,
    pub actual: u64,
    pub holds: bool,
}

/// One generated instance and its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub scale: usize,
    pub input: SizeReport,
    pub output: SizeReport,
    /// Whether `output ≤ α·input + β` in element mode.
    pub within_bound: bool,
    pub formulas: Vec<FormulaResult>,
}

impl GrowthPoint {
    pub fn ratio(&self, mode: SizeMode) -> Option<f64> {
        let input = self.input.get(mode);
        (input > 0).then(|| self.output.get(mode) as f64 / input as f64)
    }
}

/// Largest ratio and least-squares slope through the origin for one size
/// mode, over points with positive input size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub max_ratio: f64,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub reduction: String,
    pub family: GeneratorSpec,
    pub alpha: String,
    pub beta: String,
    /// Sorted by element-mode input size, then scale.
    pub points: Vec<GrowthPoint>,
    pub element: ModeSummary,
    pub bits: ModeSummary,
    /// Every point within the element-mode bound.
    pub passed: bool,
    /// Every count formula held with equality.
    pub formulas_hold: bool,
    pub violations: Vec<String>,
}

fn summarize(points: &[GrowthPoint], mode: SizeMode) -> ModeSummary {
    let (mut max_ratio, mut xy, mut xx) = (0.0f64, 0.0f64, 0.0f64);
    for p in points {
        if let Some(r) = p.ratio(mode) {
            max_ratio = max_ratio.max(r);
            let (x, y) = (p.input.get(mode) as f64, p.output.get(mode) as f64);
            xy += x * y;
            xx += x * x;
        }
    }
    ModeSummary {
        max_ratio,
        slope: if xx > 0.0 { xy / xx } else { 0.0 },
    }
}

/// Generates `family` at each scale, applies the reduction and records sizes,
/// the pointwise affine bound and the count formulas.
pub fn audit(reduction_id: &str, family: &GeneratorSpec, scales: &[usize]) -> Result<GrowthReport> {
    let r = by_id(reduction_id)?;
    if family.kind != r.source {
        return Err(Error::KindMismatch {
            expected: r.source,
            found: family.kind,
        });
    }
    let mut points = Vec::with_capacity(scales.len());
    for &scale in scales {
        let source = generate(&family.with_size(scale))?;
        let target = r.apply(&source)?;
        let input = measure(&source)?;
        let output = measure(&target)?;
        let formulas = r
            .check_formulas(&source, &target)
            .into_iter()
            .map(|c| FormulaResult {
                name: c.name.to_string(),
                expected: c.expected,
                actual: c.actual,
                holds: c.holds(),
            })
            .collect();
        points.push(GrowthPoint {
            scale,
            input,
            output,
            within_bound: r.growth.admits(input.elements, output.elements),
            formulas,
        });
    }
    points.sort_by_key(|p| (p.input.elements, p.scale));

    let mut violations = Vec::new();
    for p in &points {
        if !p.within_bound {
            violations.push(format!(
                "scale {}: output {} exceeds {} at input {}",
                p.scale, p.output.elements, r.growth, p.input.elements
            ));
        }
        for f in p.formulas.iter().filter(|f| !f.holds) {
            violations.push(format!(
                "scale {}: {} expected {}, got {}",
                p.scale, f.name, f.expected, f.actual
            ));
        }
    }
    Ok(GrowthReport {
        reduction: r.id.to_string(),
        family: family.clone(),
        alpha: r.growth.alpha.to_string(),
        beta: r.growth.beta.to_string(),
        element: summarize(&points, SizeMode::Element),
        bits: summarize(&points, SizeMode::Bits),
        passed: points.iter().all(|p| p.within_bound),
        formulas_hold: points.iter().all(|p| p.formulas.iter().all(|f| f.holds)),
        points,
        violations,
    })
}

fn ratio_cell(r: Option<f64>) -> String {
    r.map_or_else(|| "-".into(), |r| format!("{r:.3}"))
}

impl GrowthReport {
    /// Aligned-column table.
    pub fn to_table(&self) -> String {
        let header = ["scale", "in", "out", "ratio", "in_bits", "out_bits", "ratio_bits", "bound", "formulas"];
        let rows: Vec<[String; 9]> = self
            .points
            .iter()
            .map(|p| {
                [
                    p.scale.to_string(),
                    p.input.elements.to_string(),
                    p.output.elements.to_string(),
                    ratio_cell(p.ratio(SizeMode::Element)),
                    p.input.bits.to_string(),
                    p.output.bits.to_string(),
                    ratio_cell(p.ratio(SizeMode::Bits)),
                    if p.within_bound { "ok" } else { "FAIL" }.to_string(),
                    match p.formulas.iter().filter(|f| !f.holds).count() {
                        _ if p.formulas.is_empty() => "-".to_string(),
                        0 => format!("{} ok", p.formulas.len()),
                        bad => format!("{bad} FAIL"),
                    },
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "reduction {}  claim {}·x + {}", self.reduction, self.alpha, self.beta);
        let line = |out: &mut String, cells: &[&str]| {
            let text: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", text.join("  "));
        };
        line(&mut out, &header);
        for row in &rows {
            line(&mut out, &row.each_ref().map(String::as_str));
        }
        let _ = writeln!(
            out,
            "max ratio {:.3} (bits {:.3})  slope {:.3} (bits {:.3})",
            self.element.max_ratio, self.bits.max_ratio, self.element.slope, self.bits.slope
        );
        let _ = writeln!(
            out,
            "bound {}  formulas {}",
            if self.passed { "PASS" } else { "FAIL" },
            if self.formulas_hold { "PASS" } else { "FAIL" }
        );
        for v in &self.violations {
            let _ = writeln!(out, "  {v}");
        }
        out
    }
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}
