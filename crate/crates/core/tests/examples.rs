mod finite_field {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/finite_field.rs"));
}

mod coefficient_search {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coefficient_search.rs"));
}

mod uplink_cof {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/uplink_cof.rs"));
}

mod quantized_schemes {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quantized_schemes.rs"));
}

mod antenna_selection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/antenna_selection.rs"));
}

mod downlink_baselines {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/downlink_baselines.rs"));
}

mod wyner_model {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/wyner_model.rs"));
}

mod integer_forcing_beamforming {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/integer_forcing_beamforming.rs"));
}

mod monte_carlo {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monte_carlo.rs"));
}

#[test]
fn finite_field_example_runs() {
    finite_field::run_example().expect("finite_field example should run");
}

#[test]
fn coefficient_search_example_runs() {
    coefficient_search::run_example().expect("coefficient_search example should run");
}

#[test]
fn uplink_cof_example_runs() {
    uplink_cof::run_example().expect("uplink_cof example should run");
}

#[test]
fn quantized_schemes_example_runs() {
    quantized_schemes::run_example().expect("quantized_schemes example should run");
}

#[test]
fn antenna_selection_example_runs() {
    antenna_selection::run_example().expect("antenna_selection example should run");
}

#[test]
fn downlink_baselines_example_runs() {
    downlink_baselines::run_example().expect("downlink_baselines example should run");
}

#[test]
fn wyner_model_example_runs() {
    wyner_model::run_example().expect("wyner_model example should run");
}

#[test]
fn integer_forcing_beamforming_example_runs() {
    integer_forcing_beamforming::run_example().expect("integer_forcing_beamforming example should run");
}

#[test]
fn monte_carlo_example_runs() {
    monte_carlo::run_example().expect("monte_carlo example should run");
}
