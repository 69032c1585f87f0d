#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const TOY_STANDARD: &str = r#"{
  "standard_iri": "https://ofn.gov.cz/turistické-cíle/2020-07-01/",
  "features": [
    {"path": "properties.@context", "obligation": "mandatory"},
    {"path": "properties.název", "obligation": "mandatory"},
    {"path": "properties.umístění.adresa", "obligation": "mandatory"},
    {"path": "geometry.type", "obligation": "mandatory"},
    {"path": "geometry.coordinates", "obligation": "mandatory"},
    {"path": "properties.vstupné", "obligation": "optional"},
    {"path": "properties.web", "obligation": "optional"}
  ]
}"#;

/// Matches [`TOY_STANDARD`] exactly: every feature present, one type per
/// feature, no nulls.
pub const PERFECT_GEOJSON: &str = r#"{
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature",
     "geometry": {"type": "Point", "coordinates": [16.6068, 49.1951]},
     "properties": {
       "@context": "https://ofn.gov.cz/turistické-cíle/2020-07-01/kontext.jsonld",
       "název": "Hrad Špilberk",
       "umístění": {"adresa": "Špilberk 210/1"},
       "vstupné": 150,
       "web": "https://www.spilberk.cz"}},
    {"type": "Feature",
     "geometry": {"type": "Point", "coordinates": [16.5965, 49.1905]},
     "properties": {
       "@context": "https://ofn.gov.cz/turistické-cíle/2020-07-01/kontext.jsonld",
       "název": "Vila Tugendhat",
       "umístění": {"adresa": "Černopolní 45"},
       "vstupné": 350,
       "web": "https://www.tugendhat.eu"}}
  ]
}"#;

pub fn odq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odq"))
        .args(args)
        .env_remove("ODQ_CACHE_DIR")
        .output()
        .expect("odq binary runs")
}

pub fn write(dir: &Path, name: &str, content: impl AsRef<[u8]>) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

pub fn xlsx_bytes() -> Vec<u8> {
    let mut book = rust_xlsxwriter::Workbook::new();
    let sheet = book.add_worksheet();
    for (col, name) in ["nazev", "adresa", "kapacita"].iter().enumerate() {
        sheet.write_string(0, col as u16, *name).unwrap();
    }
    sheet.write_string(1, 0, "Hrad").unwrap();
    sheet.write_string(1, 1, "Hlavní 12").unwrap();
    sheet.write_number(1, 2, 40.0).unwrap();
    sheet.write_string(2, 0, "Zámek").unwrap();
    sheet.write_number(2, 2, 12.5).unwrap();
    book.save_to_buffer().unwrap()
}

/// Six local distributions in six formats plus a manifest listing them.
pub fn six_dataset_manifest(dir: &Path) -> PathBuf {
    write(dir, "standard.json", TOY_STANDARD);
    write(dir, "brno.geojson", PERFECT_GEOJSON);
    write(dir, "decin.xlsx", xlsx_bytes());
    write(
        dir,
        "hradec.json",
        r#"[{"name": "Zámek", "web": "https://zamek.cz", "phone": "+420 495 123 456"},
            {"name": "Hrad", "web": null, "phone": "495123456"}]"#,
    );
    write(
        dir,
        "huntirov.csv",
        "nazev,umisteni,vstupne\nRozhledna,Horní 5,50\nKaple,,zdarma\n",
    );
    write(
        dir,
        "ostrava.xml",
        r#"<?xml version="1.0"?><cile><cil><nazev>Důl</nazev><gps>POINT (18.28 49.83)</gps></cil><cil><nazev>Věž</nazev><gps>POINT (18.29 49.84)</gps></cil></cile>"#,
    );
    write(
        dir,
        "praha.kml",
        r#"<kml><Document><Placemark><name>Petřín</name></Placemark><Placemark><name>Vyšehrad</name></Placemark></Document></kml>"#,
    );
    write(
        dir,
        "manifest.json",
        r#"{"entries": [
            {"id": "brno", "source": "brno.geojson"},
            {"id": "decin", "source": "decin.xlsx"},
            {"id": "hradec", "source": "hradec.json"},
            {"id": "huntirov", "source": "huntirov.csv"},
            {"id": "ostrava", "source": "ostrava.xml"},
            {"id": "praha", "source": "praha.kml"}
        ]}"#,
    )
}
