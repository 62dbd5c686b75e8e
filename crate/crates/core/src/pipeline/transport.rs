use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::mock::MockAdapter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("cannot start adapter `{command}`: {message}")]
    Spawn { command: String, message: String },
    #[error("adapter connection lost: {0}")]
    Closed(String),
    #[error("http: {0}")]
    Http(String),
}

/// Moves request lines to an adapter and response lines back.
pub trait Transport: Send {
    /// Sends every line, then gathers response lines until as many have
    /// arrived as were sent or `timeout` has elapsed. Responses may come
    /// back in any order, and late ones may be missing.
    fn exchange(&mut self, lines: &[String], timeout: Duration) -> Result<Vec<String>, TransportError>;

    /// Brings a failed adapter back to a usable state.
    fn restart(&mut self) -> Result<(), TransportError>;

    /// How the adapter was reached, for manifests and error messages.
    fn identity(&self) -> String;
}

/// An adapter process spoken to over its standard input and output.
pub struct StdioTransport {
    argv: Vec<String>,
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl StdioTransport {
    /// Starts `command`, split into words with shell quoting rules.
    pub fn spawn(command: &str) -> Result<Self, TransportError> {
        let argv = shlex::split(command)
            .filter(|a| !a.is_empty())
            .ok_or_else(|| TransportError::Spawn {
                command: command.to_owned(),
                message: "cannot split command line".into(),
            })?;
        Self::spawn_argv(argv)
    }

    pub fn spawn_argv(argv: Vec<String>) -> Result<Self, TransportError> {
        let (child, stdin, lines) = launch(&argv)?;
        Ok(StdioTransport {
            argv,
            child,
            stdin,
            lines,
        })
    }
}

fn launch(argv: &[String]) -> Result<(Child, ChildStdin, Receiver<String>), TransportError> {
    let spawn_err = |message: String| TransportError::Spawn {
        command: argv.join(" "),
        message,
    };
    let (program, args) = argv.split_first().ok_or_else(|| spawn_err("empty command".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| spawn_err(e.to_string()))?;
    let stdin = child.stdin.take().expect("stdin was piped");
    let stdout = child.stdout.take().expect("stdout was piped");
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for line in BufReader::new(stdout).lines() {
            let Ok(line) = line else { break };
            if tx.send(line).is_err() {
                break;
            }
        }
    });
    Ok((child, stdin, rx))
}

impl Transport for StdioTransport {
    fn exchange(&mut self, lines: &[String], timeout: Duration) -> Result<Vec<String>, TransportError> {
        // Late answers to an earlier, timed-out batch would otherwise be
        // counted against this one.
        while self.lines.try_recv().is_ok() {}
        let mut batch = String::new();
        for line in lines {
            batch.push_str(line);
            batch.push('\n');
        }
        self.stdin
            .write_all(batch.as_bytes())
            .and_then(|()| self.stdin.flush())
            .map_err(|e| TransportError::Closed(e.to_string()))?;
        let deadline = Instant::now() + timeout;
        let mut out = Vec::with_capacity(lines.len());
        while out.len() < lines.len() {
            let left = deadline.saturating_duration_since(Instant::now());
            match self.lines.recv_timeout(left) {
                Ok(line) => out.push(line),
                Err(RecvTimeoutError::Timeout) => break,
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(TransportError::Closed("adapter closed its output".into()))
                }
            }
        }
        Ok(out)
    }

    fn restart(&mut self) -> Result<(), TransportError> {
        let _ = self.child.kill();
        let _ = self.child.wait();
        let (child, stdin, lines) = launch(&self.argv)?;
        self.child = child;
        self.stdin = stdin;
        self.lines = lines;
        Ok(())
    }

    fn identity(&self) -> String {
        format!("stdio:{}", self.argv.join(" "))
    }
}

impl Drop for StdioTransport {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// An adapter behind an HTTP endpoint that takes request lines as a POST
/// body and answers with response lines.
pub struct HttpTransport {
    url: String,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>) -> Self {
        HttpTransport { url: url.into() }
    }
}

impl Transport for HttpTransport {
    fn exchange(&mut self, lines: &[String], timeout: Duration) -> Result<Vec<String>, TransportError> {
        let mut body = lines.join("\n");
        body.push('\n');
        let reply = ureq::post(&self.url)
            .timeout(timeout)
            .set("Content-Type", "application/x-ndjson")
            .send_string(&body)
            .map_err(|e| TransportError::Http(e.to_string()))?
            .into_string()
            .map_err(|e| TransportError::Http(e.to_string()))?;
        Ok(reply
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::to_owned)
            .collect())
    }

    fn restart(&mut self) -> Result<(), TransportError> {
        Ok(())
    }

    fn identity(&self) -> String {
        format!("http:{}", self.url)
    }
}

/// The mock adapter called directly, without a process or socket.
#[derive(Debug, Clone, Default)]
pub struct InProcess {
    pub adapter: MockAdapter,
}

impl InProcess {
    pub fn new(adapter: MockAdapter) -> Self {
        InProcess { adapter }
    }
}

impl Transport for InProcess {
    fn exchange(&mut self, lines: &[String], _timeout: Duration) -> Result<Vec<String>, TransportError> {
        Ok(lines.iter().map(|l| self.adapter.handle_line(l)).collect())
    }

    fn restart(&mut self) -> Result<(), TransportError> {
        Ok(())
    }

    fn identity(&self) -> String {
        "mock".into()
    }
}
