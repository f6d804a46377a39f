//! Plot-ready text formats for spectra, audits, sampled wavefunctions and
//! the delta-source estimate.
//!
//! Every float is written with 17 significant digits so that parsing the
//! text back reproduces the original bits. CSV uses a '.' decimal point
//! and a ',' field separator regardless of locale.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hermiticity::HermiticityReport;
use crate::model::{
    BoundaryConditionFamily, QuantumChannel, RadialMode, Spectrum, SpectrumEntry, Units,
};
use crate::singularity::DeltaWeightEstimate;

/// Render a float with 17 significant digits (one leading digit plus 16
/// decimals in scientific notation), enough to reproduce any f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Spectrum as CSV with header `n,k,E,nodes`.
pub fn spectrum_to_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from("n,k,E,nodes\n");
    for e in spectrum.entries() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.n,
            format_float(e.k),
            format_float(e.energy),
            e.nodes
        ));
    }
    out
}

/// Spectrum as JSON, carrying the geometry and units needed to rebuild it.
pub fn spectrum_to_json(spectrum: &Spectrum) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!(
        "  \"radius\": {},\n",
        format_float(spectrum.radius())
    ));
    out.push_str(&format!("  \"l\": {},\n", spectrum.channel().l));
    out.push_str(&format!("  \"family\": \"{}\",\n", spectrum.family()));
    out.push_str(&format!(
        "  \"hbar\": {},\n",
        format_float(spectrum.units().hbar)
    ));
    out.push_str(&format!(
        "  \"mu\": {},\n",
        format_float(spectrum.units().mu)
    ));
    out.push_str("  \"entries\": [\n");
    let last = spectrum.len();
    for (i, e) in spectrum.entries().iter().enumerate() {
        out.push_str(&format!(
            "    {{\"n\": {}, \"k\": {}, \"E\": {}, \"nodes\": {}}}{}\n",
            e.n,
            format_float(e.k),
            format_float(e.energy),
            e.nodes,
            if i + 1 == last { "" } else { "," }
        ));
    }
    out.push_str("  ]\n}\n");
    out
}

#[derive(Deserialize)]
struct SpectrumFile {
    radius: f64,
    l: u32,
    family: BoundaryConditionFamily,
    hbar: f64,
    mu: f64,
    entries: Vec<EntryFile>,
}

#[derive(Deserialize)]
struct EntryFile {
    n: u32,
    k: f64,
    #[serde(rename = "E")]
    energy: f64,
    nodes: u32,
}

/// Parse a spectrum back from its JSON form.
pub fn spectrum_from_json(text: &str) -> Result<Spectrum> {
    let file: SpectrumFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("spectrum file: {e}")))?;
    let entries = file
        .entries
        .into_iter()
        .map(|e| SpectrumEntry {
            n: e.n,
            k: e.k,
            energy: e.energy,
            nodes: e.nodes,
        })
        .collect();
    Spectrum::new(
        QuantumChannel::new(file.l),
        file.family,
        file.radius,
        Units {
            hbar: file.hbar,
            mu: file.mu,
        },
        entries,
    )
}

fn complex_json(z: num_complex::Complex64) -> String {
    format!(
        "{{\"re\": {}, \"im\": {}}}",
        format_float(z.re),
        format_float(z.im)
    )
}

/// Audit results for a whole spectrum as JSON: per mode the defects, the
/// endpoint magnitudes, the quadrature residual and the verdict, plus the
/// tolerances the verdicts were taken against.
pub fn audit_to_json(spectrum: &Spectrum, reports: &[HermiticityReport]) -> Result<String> {
    check_report_count(spectrum, reports)?;
    let mut out = String::from("{\n");
    out.push_str(&format!(
        "  \"radius\": {},\n  \"l\": {},\n  \"family\": \"{}\",\n",
        format_float(spectrum.radius()),
        spectrum.channel().l,
        spectrum.family()
    ));
    if let Some(first) = reports.first() {
        out.push_str(&format!(
            "  \"tolerances\": {{\"identity\": {}, \"verdict\": {}}},\n",
            format_float(first.tolerances.identity),
            format_float(first.tolerances.verdict)
        ));
    }
    out.push_str("  \"modes\": [\n");
    let last = reports.len();
    for (e, (i, r)) in spectrum.entries().iter().zip(reports.iter().enumerate()) {
        out.push_str(&format!(
            "    {{\"n\": {}, \"k\": {}, \"wronskian_defect\": {}, \"pr_defect\": {}, \
             \"chi_origin\": {}, \"chi_wall\": {}, \"quadrature_residual\": {}, \
             \"verdict\": \"{}\"}}{}\n",
            e.n,
            format_float(e.k),
            complex_json(r.wronskian_defect),
            complex_json(r.pr_defect),
            format_float(r.endpoint_magnitudes.0),
            format_float(r.endpoint_magnitudes.1),
            format_float(r.quadrature_residual),
            r.verdict,
            if i + 1 == last { "" } else { "," }
        ));
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

/// Audit summary as CSV, one row per audited mode.
pub fn audit_to_csv(spectrum: &Spectrum, reports: &[HermiticityReport]) -> Result<String> {
    check_report_count(spectrum, reports)?;
    let mut out = String::from(
        "n,k,wronskian_re,wronskian_im,pr_re,pr_im,chi_origin,chi_wall,quadrature_residual,verdict\n",
    );
    for (e, r) in spectrum.entries().iter().zip(reports) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            e.n,
            format_float(e.k),
            format_float(r.wronskian_defect.re),
            format_float(r.wronskian_defect.im),
            format_float(r.pr_defect.re),
            format_float(r.pr_defect.im),
            format_float(r.endpoint_magnitudes.0),
            format_float(r.endpoint_magnitudes.1),
            format_float(r.quadrature_residual),
            r.verdict
        ));
    }
    Ok(out)
}

fn check_report_count(spectrum: &Spectrum, reports: &[HermiticityReport]) -> Result<()> {
    if spectrum.len() != reports.len() {
        return Err(Error::invalid(format!(
            "{} spectrum entries but {} audit reports",
            spectrum.len(),
            reports.len()
        )));
    }
    Ok(())
}

/// Delta-source estimate as JSON; a missing convergence order is `null`.
pub fn delta_to_json(estimate: &DeltaWeightEstimate) -> String {
    let list = |xs: &[f64]| {
        xs.iter()
            .map(|x| format_float(*x))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "{{\n  \"epsilons\": [{}],\n  \"estimates\": [{}],\n  \"extrapolated_weight\": {},\n  \"convergence_order\": {}\n}}\n",
        list(&estimate.epsilons),
        list(&estimate.estimates),
        format_float(estimate.extrapolated_weight),
        estimate
            .convergence_order
            .map_or("null".to_string(), format_float)
    )
}

/// Wavefunction samples as CSV with columns `r,chi,R,dchi_dr` on the
/// uniform grid r_i = i a / points, i = 1..points (the origin excluded,
/// the wall included).
pub fn wavefn_to_csv(mode: &RadialMode, points: u32) -> Result<String> {
    if points < 2 {
        return Err(Error::invalid(format!(
            "wavefunction export needs at least 2 grid points, got {points}"
        )));
    }
    let a = mode.radius();
    let mut out = String::from("r,chi,R,dchi_dr\n");
    for i in 1..=points {
        let r = a * i as f64 / points as f64;
        let (chi, dchi) = mode.evaluate_chi(r)?;
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_float(r),
            format_float(chi),
            format_float(chi / r),
            format_float(dchi)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::well_spectrum;
    use crate::hermiticity::{audit, AuditTolerances};
    use crate::model::PotentialSpec;
    use crate::singularity::{default_epsilon_ladder, delta_weight};
    use proptest::strategy::Strategy;
    use std::f64::consts::PI;

    fn free_spectrum(l: u32, family: BoundaryConditionFamily, n: u32) -> Spectrum {
        let geometry = PotentialSpec::zero(1.0).unwrap();
        well_spectrum(
            &geometry,
            QuantumChannel::new(l),
            family,
            Units::default(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn floats_round_trip_bit_for_bit() {
        for x in [
            0.0,
            -0.0,
            1.0,
            PI,
            -PI * 1e100,
            2.5e-300,
            f64::MIN_POSITIVE,
            5e-324,
            -5e-324,
            1.0 / 3.0,
        ] {
            let back: f64 = format_float(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "for {x:e}");
        }
    }

    #[test]
    fn spectrum_csv_has_the_documented_columns() {
        let csv = spectrum_to_csv(&free_spectrum(0, BoundaryConditionFamily::Conventional, 2));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,k,E,nodes");
        assert!(lines[1].starts_with("1,3.1415926535897931e0,"));
        assert!(lines[1].ends_with(",0"));
        assert!(lines[2].starts_with("2,6.2831853071795862e0,"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn spectrum_json_round_trips_exactly() {
        for family in [
            BoundaryConditionFamily::Conventional,
            BoundaryConditionFamily::HuangThomann,
        ] {
            let spectrum = free_spectrum(0, family, 4);
            let back = spectrum_from_json(&spectrum_to_json(&spectrum)).unwrap();
            assert_eq!(back, spectrum);
            for (a, b) in spectrum.entries().iter().zip(back.entries()) {
                assert_eq!(a.k.to_bits(), b.k.to_bits());
                assert_eq!(a.energy.to_bits(), b.energy.to_bits());
            }
        }
    }

    #[test]
    fn malformed_spectrum_files_are_reported() {
        let err = spectrum_from_json("{\"radius\": 1.0}").unwrap_err();
        assert!(err.to_string().contains("spectrum file"));
        let err = spectrum_from_json(
            "{\"radius\": 1.0, \"l\": 2, \"family\": \"huang-thomann\", \
             \"hbar\": 1.0, \"mu\": 0.5, \"entries\": []}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("l = 0"));
    }

    #[test]
    fn audit_exports_cover_every_mode() {
        let spectrum = free_spectrum(0, BoundaryConditionFamily::Conventional, 2);
        let units = Units::default();
        let reports: Vec<HermiticityReport> = spectrum
            .well_modes()
            .unwrap()
            .iter()
            .map(|m| audit(m, units, AuditTolerances::default()).unwrap())
            .collect();
        let json = audit_to_json(&spectrum, &reports).unwrap();
        assert_eq!(json.matches("\"verdict\": \"pass\"").count(), 2);
        assert!(json.contains("\"tolerances\""));
        let csv = audit_to_csv(&spectrum, &reports).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().ends_with(",pass"));
        assert!(audit_to_json(&spectrum, &reports[..1]).is_err());
    }

    #[test]
    fn delta_json_spells_out_the_ladder() {
        let mode = RadialMode::analytic(1.0, QuantumChannel::new(0), 1.0, 0.0, 1.0).unwrap();
        let est = delta_weight(&mode, &default_epsilon_ladder(1.0)).unwrap();
        let json = delta_to_json(&est);
        assert!(json.matches("e-").count() >= 4);
        assert!(json.contains("\"extrapolated_weight\": -3.544907701811"));
        assert!(json.contains("\"convergence_order\": ") && !json.contains("null"));
        let trivial = DeltaWeightEstimate {
            epsilons: vec![1e-2, 1e-3],
            estimates: vec![0.0, 0.0],
            extrapolated_weight: 0.0,
            convergence_order: None,
        };
        assert!(delta_to_json(&trivial).contains("\"convergence_order\": null"));
    }

    proptest::proptest! {
        #[test]
        fn any_finite_float_survives_the_text_round_trip(
            x in proptest::num::f64::ANY.prop_filter("finite", |x| x.is_finite())
        ) {
            let back: f64 = format_float(x).parse().unwrap();
            proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn wavefn_grid_excludes_the_origin_and_includes_the_wall() {
        let mode = RadialMode::analytic(PI, QuantumChannel::new(0), 1.0, 1.0, 0.0)
            .unwrap()
            .normalize()
            .unwrap();
        let csv = wavefn_to_csv(&mode, 5).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,chi,R,dchi_dr");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("2.0000000000000001e-1,"));
        let last: Vec<f64> = lines[5].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(last[0], 1.0);
        assert!(last[1].abs() < 1e-14, "chi at the wall {}", last[1]);
        assert!(wavefn_to_csv(&mode, 1).is_err());
    }
}
