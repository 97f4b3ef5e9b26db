use crate::error::{Error, Result};

/// Minimum sample size for a nondegenerate change-point grid and variance splits.
pub const MIN_SAMPLE_SIZE: usize = 4;

/// A validated view of one panel column `Z_{1,h}, …, Z_{n,h}`.
#[derive(Debug, Clone, Copy)]
pub struct ComponentSeries<'a> {
    values: &'a [f64],
}

impl<'a> ComponentSeries<'a> {
    pub fn new(values: &'a [f64]) -> Result<Self> {
        if values.len() < MIN_SAMPLE_SIZE {
            return Err(Error::invalid(format!(
                "series has {} observations, need at least {MIN_SAMPLE_SIZE}",
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite observation at index {j}")));
        }
        Ok(Self { values })
    }

    #[inline]
    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An `n × d` panel stored column by column, so that the time index is
/// contiguous within each component.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSeries {
    n: usize,
    d: usize,
    data: Vec<f64>,
    labels: Vec<String>,
}

impl PanelSeries {
    /// Build from column-major data (`data[h * n + j]` is `Z_{j+1,h+1}`).
    pub fn from_column_major(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        let labels = (1..=d).map(|h| h.to_string()).collect();
        Self::with_labels(n, d, data, labels)
    }

    pub fn with_labels(n: usize, d: usize, data: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if n < MIN_SAMPLE_SIZE {
            return Err(Error::invalid(format!(
                "panel has n = {n} observations, need at least {MIN_SAMPLE_SIZE}"
            )));
        }
        if d == 0 {
            return Err(Error::invalid("panel has no components"));
        }
        if data.len() != n * d {
            return Err(Error::invalid(format!(
                "panel data has {} values, expected n·d = {}",
                data.len(),
                n * d
            )));
        }
        if labels.len() != d {
            return Err(Error::invalid(format!(
                "{} labels given for {d} components",
                labels.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at row {}, column {}",
                pos % n + 1,
                pos / n + 1
            )));
        }
        Ok(Self { n, d, data, labels })
    }

    /// Build from a list of equally long columns.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if let Some(h) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::invalid(format!(
                "column {} has {} values, expected {n}",
                h + 1,
                columns[h].len()
            )));
        }
        Self::from_column_major(n, d, columns.concat())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn column(&self, h: usize) -> &[f64] {
        &self.data[h * self.n..(h + 1) * self.n]
    }

    #[inline]
    pub fn column_mut(&mut self, h: usize) -> &mut [f64] {
        &mut self.data[h * self.n..(h + 1) * self.n]
    }

    pub fn component(&self, h: usize) -> Result<ComponentSeries<'_>> {
        ComponentSeries::new(self.column(h))
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, h: usize) -> &str {
        &self.labels[h]
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.d {
            return Err(Error::invalid(format!(
                "{} labels given for {} components",
                labels.len(),
                self.d
            )));
        }
        self.labels = labels;
        Ok(())
    }

    pub fn as_column_major(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, j: usize, h: usize) -> f64 {
        self.data[h * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_layout() {
        let p = PanelSeries::from_columns(vec![vec![0., 0., 1., 1.], vec![5., 6., 7., 8.]]).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.d(), 2);
        assert_eq!(p.column(1), &[5., 6., 7., 8.]);
        assert_eq!(p.get(2, 1), 7.0);
        assert_eq!(p.labels(), &["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn rejects_short_or_nonfinite() {
        assert!(ComponentSeries::new(&[1.0, 2.0, 3.0]).is_err());
        assert!(ComponentSeries::new(&[1.0, f64::NAN, 3.0, 4.0]).is_err());
        let err = PanelSeries::from_columns(vec![vec![0., 0., 1., 1.], vec![0., f64::INFINITY, 1., 1.]])
            .unwrap_err();
        assert!(err.to_string().contains("row 2, column 2"), "{err}");
        assert!(PanelSeries::from_columns(vec![vec![0.; 4], vec![0.; 5]]).is_err());
    }
}
