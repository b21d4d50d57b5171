//! The regression corpus, compiled in so `selftest` needs no files.

/// (file stem, contents) for every file under `corpus/`.
pub const CORPUS: &[(&str, &str)] = &[
    ("blacktri_lemma", include_str!("../../corpus/blacktri_lemma.drv")),
    ("c", include_str!("../../corpus/c.drv")),
    ("cem", include_str!("../../corpus/cem.drv")),
    ("cn", include_str!("../../corpus/cn.drv")),
    ("cs", include_str!("../../corpus/cs.drv")),
    ("d", include_str!("../../corpus/d.drv")),
    ("id", include_str!("../../corpus/id.drv")),
    ("m", include_str!("../../corpus/m.drv")),
    ("n", include_str!("../../corpus/n.drv")),
    ("p", include_str!("../../corpus/p.drv")),
    ("rcea", include_str!("../../corpus/rcea.drv")),
    ("rck2", include_str!("../../corpus/rck2.drv")),
    ("rck3", include_str!("../../corpus/rck3.drv")),
    ("t", include_str!("../../corpus/t.drv")),
    ("t_figure", include_str!("../../corpus/t_figure.drv")),
];
