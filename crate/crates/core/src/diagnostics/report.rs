//! Report serialisation: a flat `key = value` block and CSV rows.

use super::decay::DecayReport;
use super::inequalities::InequalityReport;
use super::verify::PointReport;

pub trait Report {
    fn key_values(&self) -> Vec<(String, String)>;
    fn csv_header(&self) -> &'static str;
    fn csv_rows(&self) -> Vec<String>;

    fn kv_block(&self) -> String {
        self.key_values().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn csv(&self) -> String {
        let mut out = format!("{}\n", self.csv_header());
        for row in self.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

fn index_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

impl Report for DecayReport {
    fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("p".into(), index_label(self.p)),
            ("fitted_slope".into(), format!("{:e}", self.fitted_slope)),
            ("theoretical_slope".into(), format!("{:e}", self.theoretical_slope)),
            ("relative_deviation".into(), format!("{:e}", self.relative_deviation())),
            ("fit_window".into(), format!("{},{}", self.fit_window.0, self.fit_window.1)),
            ("mass".into(), format!("{:e}", self.mass)),
            ("c_n".into(), opt(self.c_n)),
            ("c_theory".into(), opt(self.c_theory)),
            ("points".into(), self.points.len().to_string()),
        ]
    }

    fn csv_header(&self) -> &'static str {
        "p,t,norm"
    }

    fn csv_rows(&self) -> Vec<String> {
        let p = index_label(self.p);
        self.points.iter().map(|(t, v)| format!("{p},{t:e},{v:e}")).collect()
    }
}

impl Report for InequalityReport {
    fn key_values(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("name".into(), self.kind.name().into()),
            ("alpha".into(), self.alpha.to_string()),
            ("index".into(), self.index.map_or_else(String::new, |v| v.to_string())),
            ("trials".into(), self.trials.to_string()),
            ("worst_margin".into(), format!("{:e}", self.worst_margin)),
            ("empirical_constant".into(), opt(self.empirical_constant)),
        ];
        if let Some(e) = self.exponents {
            kv.push(("exponents".into(), format!("{},{},{}", e.a, e.b, e.r)));
        }
        kv.push(("passed".into(), self.passed().to_string()));
        kv
    }

    fn csv_header(&self) -> &'static str {
        "name,alpha,index,trial,margin"
    }

    fn csv_rows(&self) -> Vec<String> {
        let index = self.index.map_or_else(String::new, |v| v.to_string());
        self.margins
            .iter()
            .enumerate()
            .map(|(i, m)| format!("{},{},{index},{i},{m:e}", self.kind.name(), self.alpha))
            .collect()
    }
}

impl Report for PointReport {
    fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("name".into(), self.name.clone()),
            ("points".into(), self.rows.len().to_string()),
            ("max_error".into(), format!("{:e}", self.max_error())),
        ]
    }

    fn csv_header(&self) -> &'static str {
        "check,r,expected,computed,error"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{},{},{:e},{:e},{:e}", self.name, r.r, r.expected, r.computed, r.error))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::verify::PointCheck;

    #[test]
    fn kv_and_csv_layout() {
        let r = PointReport {
            name: "demo".into(),
            rows: vec![
                PointCheck { r: 0.0, expected: 1.0, computed: 1.0, error: 0.0 },
                PointCheck { r: 0.5, expected: 1.0, computed: 1.5, error: 0.5 },
            ],
        };
        assert_eq!(r.kv_block(), "name = demo\npoints = 2\nmax_error = 5e-1\n");
        let csv = r.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "check,r,expected,computed,error");
        assert_eq!(lines[2], "demo,0.5,1e0,1.5e0,5e-1");
    }
}
