use num_rational::Rational64;
use zklat::constructions::Catalog;
use zklat::{construction_a, EnumOptions, LatticeBasis};

#[test]
fn text_format_round_trip_preserves_the_lattice() {
    let code = Catalog::bundled().get("C_{12,32}").unwrap().code().unwrap();
    let l = construction_a(&code).unwrap();
    let back = LatticeBasis::from_text(&l.to_text()).unwrap();
    assert!(back.same_lattice(&l));
    assert_eq!(back.gram_scaled(), l.gram_scaled());
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# D4\n\ndimension 2 scale 1\n1 1\n\n1 -1\n";
    let l = LatticeBasis::from_text(text).unwrap();
    let shells = l
        .shell_sizes(Rational64::from_integer(2), &EnumOptions::default())
        .unwrap();
    assert_eq!(shells.count_int(2), 4);
}

#[test]
fn malformed_files_are_rejected() {
    for bad in [
        "",
        "dimension two scale 1\n1 0\n0 1\n",
        "dimension 2 scale 1\n1 0\n",
        "dimension 2 scale 1\n1 0\n0 x\n",
        "dimension 2 scale 1\n1 0\n2 0\n",
        "size 2\n1 0\n0 1\n",
    ] {
        assert!(LatticeBasis::from_text(bad).is_err(), "{bad:?}");
    }
}
