use num_complex::Complex64;
use proptest::prelude::*;

use hodirac::grid::{make_grid, SampledFunction};
use hodirac_cli::io::{parse_function_csv, write_function_csv};
use hodirac_cli::CliError;

fn render(f: &SampledFunction) -> String {
    let mut out = Vec::new();
    write_function_csv(f, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn round_trip_is_exact(lo in -20.0..-1.0f64, width in 2.0..40.0f64, half in 4usize..64, seed in any::<u64>()) {
        let g = make_grid(lo, lo + width, 2 * half).unwrap();
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let values: Vec<Complex64> = (0..g.len()).map(|_| Complex64::new(next() * 1e3, next() * 1e-7)).collect();
        let f = SampledFunction::new(g, values).unwrap();
        let text = render(&f);
        let back = parse_function_csv(text.as_bytes(), "memory").unwrap();
        prop_assert_eq!(back.values(), f.values());
        prop_assert_eq!(render(&back), text);
    }
}

#[test]
fn missing_im_column_reads_as_real() {
    let text = "x,re\n0,1\n0.5,2\n1,3\n1.5,4\n2,5\n2.5,6\n3,7\n3.5,8\n";
    let f = parse_function_csv(text.as_bytes(), "memory").unwrap();
    assert_eq!(f.len(), 8);
    assert!(f.values().iter().all(|v| v.im == 0.0));
    assert_eq!(f.values()[3].re, 4.0);
}

#[test]
fn uneven_abscissae_name_the_line() {
    let text = "x,re,im\n0,1,0\n0.5,1,0\n1,1,0\n1.6,1,0\n2,1,0\n";
    match parse_function_csv(text.as_bytes(), "data.csv") {
        Err(CliError::NonUniform { file, line }) => {
            assert_eq!(file, "data.csv");
            assert_eq!(line, 5);
        }
        other => panic!("expected NonUniform, got {other:?}"),
    }
}

#[test]
fn header_must_name_x_and_re() {
    let text = "a,b\n0,1\n1,2\n";
    assert!(matches!(
        parse_function_csv(text.as_bytes(), "m"),
        Err(CliError::Format(_))
    ));
}

#[test]
fn grid_ending_near_zero_round_trips() {
    // right end small against the left: the spacing, not the end, pins the points
    let g = make_grid(
        -15.749385643049088,
        -15.749385643049088 + 15.688867707476446,
        66,
    )
    .unwrap();
    let f = SampledFunction::from_real_fn(g, |x| x).unwrap();
    let text = render(&f);
    assert_eq!(
        render(&parse_function_csv(text.as_bytes(), "memory").unwrap()),
        text
    );
}
