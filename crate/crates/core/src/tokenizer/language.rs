use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The languages whose identifiers are extracted. Anything else is `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Language {
    C,
    CSharp,
    Cpp,
    Go,
    Haskell,
    Java,
    JavaScript,
    Kotlin,
    Php,
    Python,
    Ruby,
    Rust,
    Scala,
    Shell,
    Swift,
    TypeScript,
    Unknown,
}

impl Language {
    pub const SUPPORTED: [Language; 16] = [
        Language::C,
        Language::CSharp,
        Language::Cpp,
        Language::Go,
        Language::Haskell,
        Language::Java,
        Language::JavaScript,
        Language::Kotlin,
        Language::Php,
        Language::Python,
        Language::Ruby,
        Language::Rust,
        Language::Scala,
        Language::Shell,
        Language::Swift,
        Language::TypeScript,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Language::C => "C",
            Language::CSharp => "C#",
            Language::Cpp => "C++",
            Language::Go => "Go",
            Language::Haskell => "Haskell",
            Language::Java => "Java",
            Language::JavaScript => "JavaScript",
            Language::Kotlin => "Kotlin",
            Language::Php => "PHP",
            Language::Python => "Python",
            Language::Ruby => "Ruby",
            Language::Rust => "Rust",
            Language::Scala => "Scala",
            Language::Shell => "Shell",
            Language::Swift => "Swift",
            Language::TypeScript => "TypeScript",
            Language::Unknown => "Unknown",
        }
    }

    pub fn is_supported(self) -> bool {
        self != Language::Unknown
    }

    fn from_extension(ext: &str) -> Language {
        match ext {
            // `.h` is ambiguous between C, C++ and Objective-C; it is read as C.
            "c" | "h" => Language::C,
            "cs" | "csx" => Language::CSharp,
            "cpp" | "cc" | "cxx" | "c++" | "hpp" | "hh" | "hxx" | "h++" | "ipp" | "tpp" => Language::Cpp,
            "go" => Language::Go,
            "hs" => Language::Haskell,
            "java" => Language::Java,
            "js" | "mjs" | "cjs" | "jsx" => Language::JavaScript,
            "kt" | "kts" => Language::Kotlin,
            "php" | "php3" | "php4" | "php5" | "phtml" => Language::Php,
            "py" | "pyw" | "pyi" => Language::Python,
            "rb" | "rake" | "gemspec" => Language::Ruby,
            "rs" => Language::Rust,
            "scala" | "sc" => Language::Scala,
            "sh" | "bash" | "zsh" | "ksh" => Language::Shell,
            "swift" => Language::Swift,
            "ts" | "tsx" | "mts" | "cts" => Language::TypeScript,
            _ => Language::Unknown,
        }
    }

    fn from_basename(name: &str) -> Language {
        match name {
            "Rakefile" | "Gemfile" | "Guardfile" | "Podfile" | "Vagrantfile" => Language::Ruby,
            ".bashrc" | ".bash_profile" | ".zshrc" | ".profile" => Language::Shell,
            _ => Language::Unknown,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::SUPPORTED
            .iter()
            .copied()
            .chain(std::iter::once(Language::Unknown))
            .find(|lang| lang.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown language `{s}`"))
    }
}

/// Maps a path to its language by basename, then by extension. The file does not need to exist.
pub fn detect_language(path: &Path) -> Language {
    let Some(file_name) = path.file_name().and_then(|n| n.to_str()) else {
        return Language::Unknown;
    };
    let by_name = Language::from_basename(file_name);
    if by_name.is_supported() {
        return by_name;
    }
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| Language::from_extension(&e.to_ascii_lowercase()))
        .unwrap_or(Language::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_common_extensions() {
        assert_eq!(detect_language(Path::new("src/main.rs")), Language::Rust);
        assert_eq!(detect_language(Path::new("lib/util.py")), Language::Python);
        assert_eq!(detect_language(Path::new("README.md")), Language::Unknown);
        assert_eq!(detect_language(Path::new("include/foo.h")), Language::C);
        assert_eq!(detect_language(Path::new("a/B.JAVA")), Language::Java);
        assert_eq!(detect_language(Path::new("web/app.tsx")), Language::TypeScript);
        assert_eq!(detect_language(Path::new("Rakefile")), Language::Ruby);
        assert_eq!(detect_language(Path::new("Makefile")), Language::Unknown);
        assert_eq!(detect_language(Path::new("noext")), Language::Unknown);
    }

    #[test]
    fn exactly_sixteen_supported() {
        let mut names: Vec<_> = Language::SUPPORTED.iter().map(|l| l.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 16);
        assert!(!Language::SUPPORTED.contains(&Language::Unknown));
    }

    #[test]
    fn parses_names() {
        assert_eq!("c#".parse::<Language>().unwrap(), Language::CSharp);
        assert_eq!("Python".parse::<Language>().unwrap(), Language::Python);
        assert!("cobol".parse::<Language>().is_err());
    }
}
