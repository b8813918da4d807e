//! CSV tables. The first line of every table is a `#` comment naming the
//! table and its format version; the second is the column header.

use perispec::endperiodic::{CrossingEvent, SpectralCurve};
use perispec::seifert::InvariantReport;

const VERSION: u32 = 1;

fn table(name: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("# perispec {name} v{VERSION}\n").into_bytes();
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(columns).expect("write to memory");
    for r in rows {
        w.write_record(&r).expect("write to memory");
    }
    drop(w);
    String::from_utf8(out).expect("utf-8")
}

pub fn curves(curves: &[SpectralCurve]) -> String {
    let rows = curves.iter().flat_map(|c| {
        c.samples.iter().map(move |(t, z)| {
            vec![
                c.id.to_string(),
                c.multiplicity.to_string(),
                format!("{t:.12}"),
                format!("{:.12e}", z.re),
                format!("{:.12e}", z.im),
                format!("{:.12e}", z.norm()),
            ]
        })
    });
    table(
        "curves",
        &["curve", "multiplicity", "t", "re_z", "im_z", "abs_z"],
        rows,
    )
}

pub fn events(events: &[CrossingEvent]) -> String {
    let rows = events.iter().map(|e| {
        vec![
            format!("{:.12}", e.t_star),
            format!("{:.12e}", e.z_star.re),
            format!("{:.12e}", e.z_star.im),
            e.sign.to_string(),
        ]
    });
    table("events", &["t_star", "re_z", "im_z", "sign"], rows)
}

pub fn sweep(reports: &[InvariantReport]) -> String {
    let rows = reports.iter().map(|r| {
        let fibers: Vec<String> = r.fibers.iter().map(u64::to_string).collect();
        vec![
            fibers.join(" "),
            r.chi.to_string(),
            r.vortex_count.to_string(),
            r.moduli_count.to_string(),
            r.etas.eta_dir.to_string(),
            r.etas.eta_sign.to_string(),
            r.combo.to_string(),
            r.w.to_string(),
            r.casson.to_string(),
            r.mu_bar.to_string(),
            r.lambda_sw_product.to_string(),
            r.lambda_sw_circle_action.to_string(),
            r.lambda_sw_conjugation.to_string(),
            r.barmu_holds.to_string(),
            r.rohlin_parity_ok.to_string(),
        ]
    });
    table(
        "seifert-sweep",
        &[
            "fibers",
            "chi",
            "vortex_count",
            "moduli_count",
            "eta_dir",
            "eta_sign",
            "combo",
            "w",
            "casson",
            "mu_bar",
            "lambda_sw_product",
            "lambda_sw_circle_action",
            "lambda_sw_conjugation",
            "barmu_holds",
            "rohlin_parity_ok",
        ],
        rows,
    )
}
