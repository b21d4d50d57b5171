use std::fs;
use std::path::PathBuf;

use mtlogic::calculus::{parse_drv_file, DrvFile};
use mtlogic::syntax::Sig;

fn corpus() -> Vec<(String, DrvFile)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<(String, DrvFile)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map(|x| x == "drv").unwrap_or(false))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = fs::read_to_string(&p).unwrap();
            let f = parse_drv_file(&text).unwrap_or_else(|e| panic!("{}: {}", name, e));
            (name, f)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn every_file_checks() {
    let files = corpus();
    assert!(files.len() >= 14, "only {} files", files.len());
    for (name, f) in &files {
        let sig = f.sig.unwrap_or_else(|| panic!("{} has no @calculus line", name));
        assert_eq!(f.check(sig).unwrap(), Ok(()), "{}", name);
    }
}

#[test]
fn axiom_derivations_are_cut_free_and_use_their_rule() {
    for (name, f) in corpus() {
        if f.ext.is_empty() {
            continue;
        }
        assert!(f.root.is_cut_free(), "{}", name);
        assert!(f.hyps.is_empty(), "{}", name);
        for id in &f.ext {
            assert!(f.root.uses(id.name()), "{} never applies {}", name, id);
        }
    }
}

#[test]
fn derived_rules_rest_on_their_hypotheses() {
    for (name, f) in corpus() {
        if f.hyps.is_empty() {
            continue;
        }
        assert!(f.root.uses("hyp"), "{}", name);
        // Dropping the hypotheses must break the check.
        let bare = DrvFile { hyps: vec![], ..f.clone() };
        assert!(bare.check(Sig::Nabla).unwrap().is_err(), "{}", name);
    }
}

#[test]
fn embedded_copy_matches_the_directory() {
    let on_disk: Vec<String> = corpus().into_iter().map(|(n, _)| n).collect();
    let embedded: Vec<String> = mtlogic::calculus::CORPUS.iter().map(|(n, _)| n.to_string()).collect();
    assert_eq!(on_disk, embedded);
}
