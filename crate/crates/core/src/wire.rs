//! The `hironaka-policy/1` protocol: policies living in another process,
//! spoken as newline-delimited JSON over the child's standard streams.
//!
//! The engine opens with a handshake, the client echoes it, then each
//! decision is one `decide` request answered by exactly one `move` (or
//! `error`) carrying the same id.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{AgentMove, GameState, HostMove, Variant, VariantRules};
use crate::io::StateDocument;
use crate::policy::{AgentPolicy, HostPolicy};

pub const PROTOCOL: &str = "hironaka-policy/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Host,
    Agent,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Host => "host",
            Role::Agent => "agent",
        }
    }
}

/// A move on the wire: a coordinate list for the host, an index for the agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireMove {
    Host(HostMove),
    Agent(AgentMove),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WireMessage {
    Handshake {
        protocol: String,
        role: Role,
        variant: Variant,
    },
    Decide {
        id: u64,
        state: StateDocument,
        legal: Vec<WireMove>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        host_choice: Option<HostMove>,
    },
    Move {
        id: u64,
        #[serde(rename = "move")]
        mv: WireMove,
    },
    Error {
        #[serde(default)]
        id: Option<u64>,
        message: String,
    },
}

impl WireMessage {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("wire messages always serialize")
    }

    pub fn parse(line: &str) -> Result<Self> {
        serde_json::from_str(line.trim_end())
            .map_err(|e| GameError::Document(format!("bad wire message: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExternalOptions {
    pub handshake_timeout: Duration,
    pub decision_timeout: Duration,
}

impl Default for ExternalOptions {
    fn default() -> Self {
        ExternalOptions {
            handshake_timeout: Duration::from_secs(10),
            decision_timeout: Duration::from_secs(10),
        }
    }
}

fn fault(msg: impl Into<String>) -> GameError {
    GameError::ExternalPolicyFault(msg.into())
}

/// Engine side of one connection. Owns the child process.
struct Connection {
    command: String,
    role: Role,
    variant: Variant,
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    options: ExternalOptions,
    next_id: u64,
    broken: bool,
}

impl Connection {
    fn open(command: &str, role: Role, variant: Variant, options: ExternalOptions) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| fault(format!("cannot spawn `{command}`: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        let mut conn = Connection {
            command: command.to_string(),
            role,
            variant,
            child,
            stdin,
            lines: rx,
            options,
            next_id: 0,
            broken: false,
        };
        conn.handshake()?;
        Ok(conn)
    }

    fn handshake(&mut self) -> Result<()> {
        let hello = WireMessage::Handshake {
            protocol: PROTOCOL.into(),
            role: self.role,
            variant: self.variant,
        };
        self.send(&hello)?;
        match self.receive(self.options.handshake_timeout)? {
            WireMessage::Handshake {
                protocol,
                role,
                variant,
            } => {
                if protocol != PROTOCOL {
                    return Err(self.fail(format!(
                        "handshake protocol `{protocol}`, expected `{PROTOCOL}`"
                    )));
                }
                if role != self.role || variant != self.variant {
                    return Err(self.fail(format!(
                        "handshake answered as {} for {variant}, expected {} for {}",
                        role.as_str(),
                        self.role.as_str(),
                        self.variant
                    )));
                }
                Ok(())
            }
            other => Err(self.fail(format!("expected handshake, got {}", other.to_line()))),
        }
    }

    fn send(&mut self, msg: &WireMessage) -> Result<()> {
        let mut line = msg.to_line();
        line.push('\n');
        if let Err(e) = self
            .stdin
            .write_all(line.as_bytes())
            .and_then(|_| self.stdin.flush())
        {
            return Err(self.fail(format!("write failed: {e}")));
        }
        Ok(())
    }

    fn receive(&mut self, timeout: Duration) -> Result<WireMessage> {
        let line = match self.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => line,
            Ok(Err(e)) => return Err(self.fail(format!("read failed: {e}"))),
            Err(RecvTimeoutError::Timeout) => {
                return Err(self.fail(format!("no answer within {timeout:?}")))
            }
            Err(RecvTimeoutError::Disconnected) => return Err(self.fail("stream closed")),
        };
        WireMessage::parse(&line).map_err(|e| self.fail(e.to_string()))
    }

    fn fail(&mut self, msg: impl Into<String>) -> GameError {
        self.broken = true;
        fault(format!("`{}`: {}", self.command, msg.into()))
    }

    /// One request/response round trip; the answer must be legal.
    fn decide(
        &mut self,
        state: &GameState,
        legal: Vec<WireMove>,
        host_choice: Option<HostMove>,
    ) -> Result<WireMove> {
        if self.broken {
            return Err(fault(format!(
                "`{}`: connection already faulted",
                self.command
            )));
        }
        self.next_id += 1;
        let id = self.next_id;
        let request = WireMessage::Decide {
            id,
            state: StateDocument::from_state(self.variant, state),
            legal: legal.clone(),
            host_choice,
        };
        self.send(&request)?;
        match self.receive(self.options.decision_timeout)? {
            WireMessage::Move { id: got, mv } => {
                if got != id {
                    return Err(self.fail(format!("answer for id {got} while {id} is pending")));
                }
                if !legal.contains(&mv) {
                    return Err(self.fail(format!(
                        "illegal move {} for request {id}",
                        serde_json::json!(mv)
                    )));
                }
                Ok(mv)
            }
            WireMessage::Error { message, .. } => {
                Err(self.fail(format!("client error: {message}")))
            }
            other => Err(self.fail(format!("expected move, got {}", other.to_line()))),
        }
    }
}

impl Drop for Connection {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A host policy served by a child process.
pub struct ExternalHost {
    conn: Connection,
}

impl ExternalHost {
    pub fn spawn(command: &str, variant: Variant, options: ExternalOptions) -> Result<Self> {
        Ok(ExternalHost {
            conn: Connection::open(command, Role::Host, variant, options)?,
        })
    }
}

impl HostPolicy for ExternalHost {
    fn name(&self) -> String {
        format!("ext:{}", self.conn.command)
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        check_variant(&self.conn, rules)?;
        let legal = rules
            .legal_host_moves(state)?
            .into_iter()
            .map(WireMove::Host)
            .collect();
        match self.conn.decide(state, legal, None)? {
            WireMove::Host(m) => Ok(m),
            WireMove::Agent(_) => unreachable!("legality check admits only host moves"),
        }
    }
}

/// An agent policy served by a child process.
pub struct ExternalAgent {
    conn: Connection,
}

impl ExternalAgent {
    pub fn spawn(command: &str, variant: Variant, options: ExternalOptions) -> Result<Self> {
        Ok(ExternalAgent {
            conn: Connection::open(command, Role::Agent, variant, options)?,
        })
    }
}

impl AgentPolicy for ExternalAgent {
    fn name(&self) -> String {
        format!("ext:{}", self.conn.command)
    }

    fn decide(
        &mut self,
        state: &GameState,
        host_move: HostMove,
        rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        check_variant(&self.conn, rules)?;
        let legal = rules
            .legal_agent_moves(state, host_move)
            .into_iter()
            .map(WireMove::Agent)
            .collect();
        match self.conn.decide(state, legal, Some(host_move))? {
            WireMove::Agent(i) => Ok(i),
            WireMove::Host(_) => unreachable!("legality check admits only agent moves"),
        }
    }
}

fn check_variant(conn: &Connection, rules: &VariantRules) -> Result<()> {
    if rules.variant != conn.variant {
        return Err(fault(format!(
            "policy negotiated {} but is asked to play {}",
            conn.variant, rules.variant
        )));
    }
    Ok(())
}

/// The policy a [`serve`] loop answers with.
pub enum Served {
    Host(Box<dyn HostPolicy>),
    Agent(Box<dyn AgentPolicy>),
}

impl Served {
    fn role(&self) -> Role {
        match self {
            Served::Host(_) => Role::Host,
            Served::Agent(_) => Role::Agent,
        }
    }
}

/// Client side: answers an engine on `input`/`output` until end of input.
///
/// Requests the policy cannot answer get an `error` message; protocol
/// violations by the engine end the loop with an error.
pub fn serve<R: BufRead, W: Write>(
    mut policy: Served,
    input: R,
    mut output: W,
    rng: &mut dyn RngCore,
) -> Result<()> {
    let mut lines = input.lines();
    let Some(first) = lines.next() else {
        return Err(fault("engine closed before the handshake"));
    };
    let variant = match WireMessage::parse(&first?)? {
        WireMessage::Handshake {
            protocol,
            role,
            variant,
        } if protocol == PROTOCOL && role == policy.role() => variant,
        WireMessage::Handshake { protocol, role, .. } => {
            return Err(fault(format!(
                "engine asked for {} over `{protocol}`; this client serves {} over `{PROTOCOL}`",
                role.as_str(),
                policy.role().as_str()
            )))
        }
        other => {
            return Err(fault(format!(
                "expected handshake, got {}",
                other.to_line()
            )))
        }
    };
    let rules = variant.rules();
    let reply = WireMessage::Handshake {
        protocol: PROTOCOL.into(),
        role: policy.role(),
        variant,
    };
    writeln!(output, "{}", reply.to_line())?;
    output.flush()?;

    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, state, host_choice) = match WireMessage::parse(&line) {
            Ok(WireMessage::Decide {
                id,
                state,
                legal: _,
                host_choice,
            }) => (id, state, host_choice),
            Ok(_) => return Err(fault(format!("expected decide, got {line}"))),
            Err(e) => {
                // Answer malformed requests so the engine can report them.
                let id = serde_json::from_str::<serde_json::Value>(&line)
                    .ok()
                    .and_then(|v| v["id"].as_u64());
                writeln!(
                    output,
                    "{}",
                    WireMessage::Error {
                        id,
                        message: e.to_string()
                    }
                    .to_line()
                )?;
                output.flush()?;
                continue;
            }
        };
        let answer = state
            .to_state()
            .and_then(|s| match (&mut policy, host_choice) {
                (Served::Host(p), None) => p.decide(&s, &rules, rng).map(WireMove::Host),
                (Served::Agent(p), Some(hm)) => p.decide(&s, hm, &rules, rng).map(WireMove::Agent),
                (Served::Host(_), Some(_)) => Err(GameError::Document(
                    "host request carries host_choice".into(),
                )),
                (Served::Agent(_), None) => Err(GameError::Document(
                    "agent request lacks host_choice".into(),
                )),
            });
        let msg = match answer {
            Ok(mv) => WireMessage::Move { id, mv },
            Err(e) => WireMessage::Error {
                id: Some(id),
                message: e.to_string(),
            },
        };
        writeln!(output, "{}", msg.to_line())?;
        output.flush()?;
    }
    Ok(())
}
