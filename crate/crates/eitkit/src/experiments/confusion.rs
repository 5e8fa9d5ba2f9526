//! Confusion matrices: rows are actual classes, columns are predicted.

use crate::error::{EitError, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// class labels indexing rows and columns
    pub labels: Vec<u32>,
    /// counts[actual][predicted]
    pub counts: Vec<Vec<usize>>,
}

/// Tally actual vs predicted labels over the given class list.
pub fn confusion(actual: &[u32], predicted: &[u32], labels: &[u32]) -> Result<ConfusionMatrix> {
    if actual.is_empty() || actual.len() != predicted.len() {
        return Err(EitError::InvalidArgument(format!(
            "need equal-length non-empty label lists, got {} and {}",
            actual.len(),
            predicted.len()
        )));
    }
    let n = labels.len();
    let index_of = |l: u32| -> Result<usize> {
        labels.iter().position(|&x| x == l).ok_or_else(|| {
            EitError::InvalidArgument(format!("label {l} outside class list {labels:?}"))
        })
    };
    let mut counts = vec![vec![0usize; n]; n];
    for (&a, &p) in actual.iter().zip(predicted) {
        counts[index_of(a)?][index_of(p)?] += 1;
    }
    Ok(ConfusionMatrix { labels: labels.to_vec(), counts })
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|row| row.iter().sum::<usize>()).sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    /// trace / total
    pub fn accuracy(&self) -> f64 {
        self.trace() as f64 / self.total() as f64
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        let n = self.labels.len();
        (0..n).map(|j| self.counts.iter().map(|row| row[j]).sum()).collect()
    }

    /// CSV with a header row/column of class labels.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("actual\\predicted");
        for l in &self.labels {
            write!(out, ",{l}").expect("string write");
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            write!(out, "{l}").expect("string write");
            for v in &self.counts[i] {
                write!(out, ",{v}").expect("string write");
            }
            out.push('\n');
        }
        out
    }

    /// SVG heatmap: correct cells shade blue, misclassifications shade red,
    /// darker for higher counts; annotated with the overall accuracy.
    pub fn to_svg(&self, title: &str) -> String {
        let n = self.labels.len();
        let cell = 56.0;
        let margin = 70.0;
        let width = margin + n as f64 * cell + 20.0;
        let height = margin + n as f64 * cell + 46.0;
        let max = self.counts.iter().flatten().copied().max().unwrap_or(1).max(1) as f64;
        let mut s = String::new();
        write!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
             viewBox=\"0 0 {width:.0} {height:.0}\">\n"
        )
        .expect("string write");
        write!(
            s,
            "<text x=\"{:.0}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" \
             text-anchor=\"middle\">{title} (accuracy {:.1}%)</text>\n",
            width / 2.0,
            100.0 * self.accuracy()
        )
        .expect("string write");
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let x = margin + j as f64 * cell;
                let y = margin + i as f64 * cell;
                let t = (v as f64 / max).sqrt();
                let (r, g, b) = if i == j {
                    // blue ramp
                    let shade = (230.0 - 160.0 * t) as u8;
                    (shade, shade, 255u8)
                } else {
                    let shade = (235.0 - 140.0 * t) as u8;
                    (255u8, shade, shade)
                };
                write!(
                    s,
                    "<rect x=\"{x:.0}\" y=\"{y:.0}\" width=\"{cell:.0}\" height=\"{cell:.0}\" \
                     fill=\"rgb({r},{g},{b})\" stroke=\"#666\"/>\n"
                )
                .expect("string write");
                write!(
                    s,
                    "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"13\" \
                     text-anchor=\"middle\">{v}</text>\n",
                    x + cell / 2.0,
                    y + cell / 2.0 + 4.0
                )
                .expect("string write");
            }
        }
        for (i, l) in self.labels.iter().enumerate() {
            // row labels (actual)
            write!(
                s,
                "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"13\" \
                 text-anchor=\"end\">{l}</text>\n",
                margin - 8.0,
                margin + i as f64 * cell + cell / 2.0 + 4.0
            )
            .expect("string write");
            // column labels (predicted)
            write!(
                s,
                "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"13\" \
                 text-anchor=\"middle\">{l}</text>\n",
                margin + i as f64 * cell + cell / 2.0,
                margin - 10.0
            )
            .expect("string write");
        }
        write!(
            s,
            "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">predicted class; rows are actual</text>\n",
            margin + n as f64 * cell / 2.0,
            margin + n as f64 * cell + 28.0
        )
        .expect("string write");
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions_are_diagonal() {
        let actual = [1u32, 2, 1, 2];
        let cm = confusion(&actual, &actual, &[1, 2]).unwrap();
        assert_eq!(cm.counts, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(cm.accuracy(), 1.0);
    }

    #[test]
    fn hand_counted_example() {
        let actual = [1u32, 1, 2, 2];
        let predicted = [1u32, 2, 2, 2];
        let cm = confusion(&actual, &predicted, &[1, 2]).unwrap();
        assert_eq!(cm.counts, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(cm.accuracy(), 0.75);
        assert_eq!(cm.row_sums(), vec![2, 2]);
        assert_eq!(cm.column_sums(), vec![1, 3]);
    }

    #[test]
    fn empty_and_out_of_range_rejected() {
        assert!(confusion(&[], &[], &[1, 2]).is_err());
        assert!(confusion(&[1, 3], &[1, 1], &[1, 2]).is_err());
    }

    #[test]
    fn csv_column_sums_match_predicted_counts() {
        let actual = [1u32, 1, 2, 2, 2];
        let predicted = [2u32, 1, 2, 1, 2];
        let cm = confusion(&actual, &predicted, &[1, 2]).unwrap();
        let csv = cm.to_csv();
        let mut col = vec![0usize; 2];
        for line in csv.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            for j in 0..2 {
                col[j] += cells[j + 1].parse::<usize>().unwrap();
            }
        }
        assert_eq!(col, cm.column_sums());
    }

    #[test]
    fn svg_contains_shaded_diagonal() {
        let actual = [1u32, 2];
        let cm = confusion(&actual, &actual, &[1, 2]).unwrap();
        let svg = cm.to_svg("test");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("accuracy 100.0%"));
        // two diagonal cells carry the blue fill
        assert_eq!(svg.matches("fill=\"rgb(70,70,255)\"").count(), 2);
    }
}
