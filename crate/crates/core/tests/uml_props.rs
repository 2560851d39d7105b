mod common;

use proptest::prelude::*;

use tmuml_core::uml::{
    parse_class, parse_usecase, serialize_class, serialize_uml, serialize_usecase, UmlError,
    UmlModel, UseCaseModel,
};

#[test]
fn banking_relations() {
    let m = parse_usecase(&common::read_corpus("banking/usecase.uc")).unwrap();
    assert!(m
        .includes
        .contains(&("Login".to_string(), "VerifyPassword".to_string())));
    assert!(m
        .extends
        .iter()
        .any(|e| e.extension == "Error" && e.base == "VerifyPassword" && e.condition.is_some()));
}

#[test]
fn invoice_class() {
    let m = parse_class(&common::read_corpus("invoice/class.cls")).unwrap();
    let c = m.class("Invoice").unwrap();
    let attrs: Vec<_> = c.attributes.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(attrs, ["approvalStatus", "id"]);
    let mut ops: Vec<_> = c.operations.iter().map(|o| o.name.as_str()).collect();
    ops.sort();
    assert_eq!(
        ops,
        [
            "Createinvoice",
            "Deleteinvoice",
            "Printinvoice",
            "Registerinvoice",
            "Sendinvoice",
            "Updateinvoice"
        ]
    );
}

#[test]
fn corpus_files_round_trip() {
    for f in ["invoice/usecase.uc", "banking/usecase.uc"] {
        let m = parse_usecase(&common::read_corpus(f)).unwrap();
        let text = serialize_usecase(&m);
        assert_eq!(parse_usecase(&text).unwrap(), m, "{f}");
        assert_eq!(serialize_usecase(&parse_usecase(&text).unwrap()), text);
    }
    for f in ["invoice/class.cls", "banking/class.cls"] {
        let m = parse_class(&common::read_corpus(f)).unwrap();
        let text = serialize_class(&m);
        assert_eq!(parse_class(&text).unwrap(), m, "{f}");
    }
}

#[test]
fn subject_only_model_is_two_lines() {
    let text = serialize_uml(&UmlModel::UseCase(UseCaseModel::new("S")));
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn self_include_is_rejected() {
    let err = parse_usecase("subject S\nusecase U\ninclude U includes U").unwrap_err();
    assert!(matches!(err, UmlError::SelfRelation { .. }), "{err:?}");
}

#[test]
fn duplicate_attribute_is_rejected() {
    let err = parse_class("class C\n  attr id : Int\n  attr id : String").unwrap_err();
    assert!(
        matches!(err, UmlError::DuplicateName { ref name, .. } if name == "id"),
        "{err:?}"
    );
}

#[test]
fn empty_class_is_valid() {
    let m = parse_class("class Empty").unwrap();
    assert!(m.classes[0].attributes.is_empty() && m.classes[0].operations.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn usecase_round_trip(m in common::usecase_model()) {
        let text = serialize_usecase(&m);
        let back = parse_usecase(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_usecase(&back), text);
    }

    #[test]
    fn class_round_trip(m in common::class_model()) {
        let text = serialize_class(&m);
        let back = parse_class(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_class(&back), text);
    }

    #[test]
    fn two_cycle_generalization_always_errors(m in common::usecase_model(), actors in any::<bool>()) {
        let mut text = serialize_usecase(&m);
        let names: Vec<&String> = if actors {
            m.actors.iter().collect()
        } else {
            m.usecases.iter().collect()
        };
        if names.len() < 2 {
            return Ok(());
        }
        let kw = if actors { "actorgen" } else { "ucgen" };
        text.push_str(&format!("{kw} {} -> {}\n{kw} {} -> {}\n", names[0], names[1], names[1], names[0]));
        prop_assert!(matches!(parse_usecase(&text), Err(UmlError::CyclicGeneralization(_))));
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = parse_usecase(&text);
        let _ = parse_class(&text);
    }

    #[test]
    fn parsers_never_panic_on_keyword_soup(
        words in prop::collection::vec(
            prop::sample::select(vec![
                "subject", "actor", "usecase", "assoc", "--", "include", "includes", "extend",
                "extends", "[", "]", "actorgen", "ucgen", "->", "class", "attr", "op", "(", ")",
                ":", ",", "@decreate", "as", "\n", "X", "Y", "\"", "#",
            ]),
            0..40,
        )
    ) {
        let text = words.join(" ");
        let _ = parse_usecase(&text);
        let _ = parse_class(&text);
    }
}
