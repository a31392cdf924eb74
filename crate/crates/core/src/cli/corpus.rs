use std::path::{Path, PathBuf};

use crate::doc::{DocError, InstanceDocument};

const BUNDLED: [(&str, &str); 6] = [
    ("complexes.json", include_str!("../../corpus/complexes.json")),
    ("pairs.json", include_str!("../../corpus/pairs.json")),
    ("towers.json", include_str!("../../corpus/towers.json")),
    ("scattered.json", include_str!("../../corpus/scattered.json")),
    ("sets.json", include_str!("../../corpus/sets.json")),
    ("patterns.json", include_str!("../../corpus/patterns.json")),
];

/// Named instance documents: the bundled set, or every `*.json` file of
/// `$THOM_CORPUS_DIR` when that is set.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub source: String,
    pub docs: Vec<InstanceDocument>,
}

impl Corpus {
    pub fn bundled() -> Corpus {
        let mut docs = Vec::new();
        for (file, text) in BUNDLED {
            docs.extend(InstanceDocument::parse_many(text).unwrap_or_else(|e| panic!("bundled {file}: {e}")));
        }
        Corpus { source: "bundled".into(), docs }
    }

    pub fn from_dir(dir: &Path) -> Result<Corpus, DocError> {
        let read = |e: std::io::Error| DocError::Schema(format!("{}: {e}", dir.display()));
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(read)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut docs = Vec::new();
        for f in files {
            let text = std::fs::read_to_string(&f).map_err(read)?;
            let parsed = InstanceDocument::parse_many(&text).map_err(|e| match e {
                DocError::Schema(m) => DocError::Schema(format!("{}: {m}", f.display())),
                other => other,
            })?;
            docs.extend(parsed);
        }
        Ok(Corpus { source: dir.display().to_string(), docs })
    }

    pub fn from_env() -> Result<Corpus, DocError> {
        match std::env::var_os("THOM_CORPUS_DIR") {
            Some(d) if !d.is_empty() => Corpus::from_dir(Path::new(&d)),
            _ => Ok(Corpus::bundled()),
        }
    }

    pub fn get(&self, name: &str) -> Option<&InstanceDocument> {
        self.docs.iter().find(|d| d.name() == name)
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a InstanceDocument> + 'a {
        self.docs.iter().filter(move |d| d.kind() == kind)
    }
}

/// Resolves a command-line input: a file path (optionally `path#name` to
/// pick one document of a multi-document file), else a corpus entry name.
pub fn resolve(input: &str, corpus: &Corpus) -> Result<InstanceDocument, DocError> {
    let (path, pick) = match input.rsplit_once('#') {
        Some((p, n)) if Path::new(p).is_file() => (p, Some(n)),
        _ => (input, None),
    };
    if Path::new(path).is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| DocError::Schema(format!("{path}: {e}")))?;
        let mut docs = InstanceDocument::parse_many(&text)?;
        return match pick {
            Some(n) => docs
                .into_iter()
                .find(|d| d.name() == n)
                .ok_or_else(|| DocError::Schema(format!("{path} has no document named {n}"))),
            None if docs.len() == 1 => Ok(docs.remove(0)),
            None => Err(DocError::Schema(format!("{path} holds {} documents; select one with {path}#NAME", docs.len()))),
        };
    }
    corpus
        .get(input)
        .cloned()
        .ok_or_else(|| DocError::Schema(format!("{input} is neither a file nor an entry of the {} corpus", corpus.source)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_builds() {
        let c = Corpus::bundled();
        for d in &c.docs {
            d.build().unwrap_or_else(|e| panic!("{}: {e}", d.name()));
        }
        assert!(c.of_kind("pair").count() >= 20);
        for name in ["point", "circle", "torus", "disk_circle", "solenoid_2", "solenoid_3", "solenoid_6", "cluster_10", "cluster_25", "cluster_50", "horizontal", "vertical"] {
            assert!(c.get(name).is_some(), "{name}");
        }
        assert_eq!(c.of_kind("pattern").count(), 4);
    }

    #[test]
    fn names_are_unique() {
        let c = Corpus::bundled();
        let mut names: Vec<&str> = c.docs.iter().map(|d| d.name()).collect();
        names.sort();
        let n = names.len();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn documents_round_trip() {
        for d in Corpus::bundled().docs {
            assert_eq!(InstanceDocument::parse(&d.to_json()).unwrap(), d);
        }
    }
}
