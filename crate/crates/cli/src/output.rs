//! JSON-lines records on standard output.

use std::io::{self, BufWriter, StdoutLock, Write};

use serde::Serialize;

/// One result line. Field order is fixed by declaration order.
#[derive(Serialize)]
pub struct Record<I, V, X = Empty> {
    pub op: &'static str,
    pub input: I,
    pub value: V,
    #[serde(flatten)]
    pub extra: X,
}

#[derive(Serialize, Default)]
pub struct Empty {}

pub struct Out {
    w: BufWriter<StdoutLock<'static>>,
    pretty: bool,
}

impl Out {
    pub fn stdout(pretty: bool) -> Self {
        Out {
            w: BufWriter::new(io::stdout().lock()),
            pretty,
        }
    }

    pub fn emit<T: Serialize>(&mut self, rec: &T) -> io::Result<()> {
        if self.pretty {
            serde_json::to_writer_pretty(&mut self.w, rec)?;
        } else {
            serde_json::to_writer(&mut self.w, rec)?;
        }
        self.w.write_all(b"\n")
    }

    /// Writes a pre-serialised line verbatim.
    pub fn line(&mut self, s: &str) -> io::Result<()> {
        self.w.write_all(s.as_bytes())?;
        self.w.write_all(b"\n")
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.w.flush()
    }
}
