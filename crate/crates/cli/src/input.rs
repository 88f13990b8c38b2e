//! Numeric CSV input. A first row that does not parse is taken as a header.

use std::path::Path;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Columns {
    pub header: Option<Vec<String>>,
    pub columns: Vec<Vec<f64>>,
}

pub fn read_columns(path: &Path, width: usize) -> CliResult<Columns> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let mut header = None;
    let mut columns = vec![Vec::new(); width];
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < width {
            return Err(CliError::data(format!(
                "row {}: expected {width} column(s), found {}",
                line + 1,
                record.len()
            )));
        }
        let parsed: Option<Vec<f64>> = record
            .iter()
            .take(width)
            .map(|field| field.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match parsed {
            Some(values) => {
                for (col, v) in columns.iter_mut().zip(values) {
                    col.push(v);
                }
            }
            None if line == 0 => {
                header = Some(record.iter().take(width).map(String::from).collect())
            }
            None => {
                return Err(CliError::data(format!(
                    "row {}: non-numeric value in {:?}",
                    line + 1,
                    record.iter().take(width).collect::<Vec<_>>()
                )))
            }
        }
    }
    if columns[0].is_empty() {
        return Err(CliError::data(format!(
            "{}: no observations",
            path.display()
        )));
    }
    Ok(Columns { header, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn header_is_optional() {
        let with = read_columns(file("residual\n-1\n0\n1\n").path(), 1).unwrap();
        let without = read_columns(file("-1\n0\n1\n").path(), 1).unwrap();
        assert_eq!(with.columns, without.columns);
        assert_eq!(with.header, Some(vec!["residual".to_string()]));
        assert_eq!(without.header, None);
    }

    #[test]
    fn two_columns() {
        let c = read_columns(file("x,y\n0,1\n1,3\n").path(), 2).unwrap();
        assert_eq!(c.columns, vec![vec![0.0, 1.0], vec![1.0, 3.0]]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(
            matches!(read_columns(file("").path(), 1), Err(CliError::Data(m)) if m.contains("no observations"))
        );
        assert!(matches!(
            read_columns(file("x\n").path(), 1),
            Err(CliError::Data(_))
        ));
        assert!(
            matches!(read_columns(file("1\nabc\n").path(), 1), Err(CliError::Data(m)) if m.contains("row 2"))
        );
        assert!(matches!(
            read_columns(file("1\nNaN\n").path(), 1),
            Err(CliError::Data(_))
        ));
        assert!(matches!(
            read_columns(file("1\n2\n").path(), 2),
            Err(CliError::Data(_))
        ));
    }
}
