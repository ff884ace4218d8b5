use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::ProblemError;

/// Labeled rows `(lᵢ, aᵢ)` with `lᵢ ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub labels: Vec<f64>,
    pub features: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn samples(&self) -> usize {
        self.labels.len()
    }

    pub fn dimension(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

/// Reads a header-less CSV of `label,feature₁,…,featureₙ` rows.
pub fn read_dataset(path: &Path) -> Result<Dataset, ProblemError> {
    let file = File::open(path).map_err(|e| ProblemError::Io(format!("{}: {e}", path.display())))?;
    read_dataset_from(file)
}

pub fn read_dataset_from<R: Read>(mut reader: R) -> Result<Dataset, ProblemError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| ProblemError::Io(e.to_string()))?;
    // csv reports a record as starting at the terminator of the line before
    // it under CRLF and blank lines; count lines from its first real byte.
    let line_at = |pos: Option<&csv::Position>| {
        let Some(p) = pos else { return 0 };
        let mut b = p.byte() as usize;
        while b < bytes.len() && matches!(bytes[b], b'\r' | b'\n') {
            b += 1;
        }
        1 + bytes[..b].iter().filter(|&&c| c == b'\n').count() as u64
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let mut labels = Vec::new();
    let mut features: Vec<Vec<f64>> = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|e| {
            let line = line_at(e.position());
            ProblemError::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        let line = line_at(record.position());
        let parse_err = |message: String| ProblemError::Parse { line, message };
        if record.len() < 2 {
            return Err(parse_err("expected a label and at least one feature".into()));
        }
        if let Some(first) = features.first() {
            if record.len() - 1 != first.len() {
                return Err(parse_err(format!(
                    "expected {} features, found {}",
                    first.len(),
                    record.len() - 1
                )));
            }
        }
        let label: f64 = record[0]
            .parse()
            .map_err(|_| parse_err(format!("label `{}` is not a number", &record[0])))?;
        if label != 1.0 && label != -1.0 {
            return Err(parse_err(format!("label must be -1 or +1, found `{}`", &record[0])));
        }
        let row = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, field)| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(parse_err(format!("feature {} `{field}` is not a finite number", j + 1))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        labels.push(label);
        features.push(row);
    }
    if labels.is_empty() {
        return Err(ProblemError::Usage("dataset has no samples".into()));
    }
    Ok(Dataset { labels, features })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lf_and_crlf() {
        let d = read_dataset_from("1,0.5,2\r\n-1,1e-3,-4\n".as_bytes()).unwrap();
        assert_eq!(d.labels, vec![1.0, -1.0]);
        assert_eq!(d.features[1], vec![1e-3, -4.0]);
    }

    #[test]
    fn reports_line_of_bad_row() {
        let err = read_dataset_from("1,0.5\n1,0.25\n-1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ProblemError::Parse { line: 3, .. }), "{err:?}");
        let err = read_dataset_from("1,0.5\n0,0.25\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ProblemError::Parse { line: 2, .. }), "{err:?}");
        let err = read_dataset_from("1,0.5\n1,0.25,3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ProblemError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn empty_input_is_usage_error() {
        assert!(matches!(read_dataset_from("".as_bytes()), Err(ProblemError::Usage(_))));
    }
}
