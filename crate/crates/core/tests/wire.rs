use std::io::Cursor;
use std::time::{Duration, Instant};

use hironaka::eval::{rho_estimate, sample_initial_state, EvalConfig};
use hironaka::policy::{play_episode, ChooseFirst, Zeillinger};
use hironaka::wire::{
    serve, ExternalAgent, ExternalHost, ExternalOptions, Served, WireMessage, PROTOCOL,
};
use hironaka::{
    AgentPolicy, AgentSpec, GameError, GameState, HostSpec, SeatRngs, Variant, VariantRules,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn served(policy: &str, role: &str) -> String {
    format!(
        "'{}' serve {policy} --role {role}",
        env!("CARGO_BIN_EXE_hironaka")
    )
}

fn quick() -> ExternalOptions {
    ExternalOptions {
        handshake_timeout: Duration::from_secs(5),
        decision_timeout: Duration::from_millis(300),
    }
}

fn a2() -> GameState {
    GameState::from_i64(&[[2, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap()
}

fn transcript(steps: &[hironaka::game::EpisodeStep]) -> String {
    steps
        .iter()
        .map(|s| {
            format!(
                "{} | {} | {} | {}\n",
                s.before, s.host_move, s.agent_move, s.after
            )
        })
        .collect()
}

#[test]
fn external_choose_first_replays_native_transcripts() {
    let rules = VariantRules::basic_shifted();
    let mut external = ExternalAgent::spawn(
        &served("choose-first", "agent"),
        Variant::BasicShifted,
        ExternalOptions::default(),
    )
    .unwrap();
    let mut sampler = ChaCha8Rng::seed_from_u64(12);
    for seed in 0..40 {
        let start = sample_initial_state(&rules, 3, 4, 10, &mut sampler);
        let remote = play_episode(
            &rules,
            start.clone(),
            &mut Zeillinger,
            &mut external,
            &mut SeatRngs::from_seed(seed),
            200,
        )
        .unwrap();
        let native = play_episode(
            &rules,
            start,
            &mut Zeillinger,
            &mut ChooseFirst,
            &mut SeatRngs::from_seed(seed),
            200,
        )
        .unwrap();
        assert_eq!(transcript(&remote.steps), transcript(&native.steps));
        assert_eq!(remote, native);
    }
}

#[test]
fn external_host_matches_native_rho() {
    let config = EvalConfig {
        steps: 200,
        repetitions: 2,
        seed: 6,
        ..EvalConfig::default()
    };
    let native = rho_estimate(&HostSpec::Zeillinger, &AgentSpec::ChooseLast, &config).unwrap();
    let ext: HostSpec = format!("ext:{}", served("zeillinger", "host"))
        .parse()
        .unwrap();
    let remote = rho_estimate(&ext, &AgentSpec::ChooseLast, &config).unwrap();
    assert_eq!(remote.per_repetition, native.per_repetition);
    assert_eq!(remote.lengths, native.lengths);
}

#[test]
fn external_policies_play_other_variants() {
    let rules = VariantRules::thom();
    let start = rules
        .initial_state(
            hironaka::PointConfiguration::from_i64(&[[3, 0, 1], [0, 4, 2], [1, 1, 5]]).unwrap(),
            Some(vec![2, 1, 1]),
        )
        .unwrap();
    let mut host = ExternalHost::spawn(
        &served("zeillinger", "host"),
        Variant::Thom,
        ExternalOptions::default(),
    )
    .unwrap();
    let mut agent = ExternalAgent::spawn(
        &served("choose-last", "agent"),
        Variant::Thom,
        ExternalOptions::default(),
    )
    .unwrap();
    let remote = play_episode(
        &rules,
        start.clone(),
        &mut host,
        &mut agent,
        &mut SeatRngs::from_seed(0),
        50,
    )
    .unwrap();
    let native = play_episode(
        &rules,
        start,
        &mut Zeillinger,
        &mut hironaka::policy::ChooseLast,
        &mut SeatRngs::from_seed(0),
        50,
    )
    .unwrap();
    assert_eq!(remote, native);
}

fn fault_of(result: hironaka::Result<impl Sized>) -> String {
    match result {
        Err(GameError::ExternalPolicyFault(m)) => m,
        Err(e) => panic!("expected a policy fault, got {e}"),
        Ok(_) => panic!("expected a policy fault, got success"),
    }
}

const HELLO: &str = r#"{"type":"handshake","protocol":"hironaka-policy/1","role":"agent","variant":"basic-shifted"}"#;

/// A shell client that completes the handshake and answers the first
/// request with `answer`, where `$id` is the request id.
fn scripted(answer: &str) -> String {
    format!(
        r#"read h; echo '{HELLO}'; read l; id=$(echo "$l" | sed 's/.*"id":\([0-9]*\).*/\1/'); echo "{answer}"; cat >/dev/null"#
    )
}

fn first_decision(command: &str) -> hironaka::Result<usize> {
    let rules = VariantRules::basic_shifted();
    let mut agent = ExternalAgent::spawn(command, Variant::BasicShifted, quick())?;
    let all = hironaka::CoordinateSubset::full(3);
    agent.decide(&a2(), all, &rules, &mut ChaCha8Rng::seed_from_u64(0))
}

#[test]
fn scripted_client_answering_legally_is_accepted() {
    let answer = r#"{\"type\":\"move\",\"id\":$id,\"move\":2}"#;
    assert_eq!(first_decision(&scripted(answer)).unwrap(), 2);
}

#[test]
fn wrong_protocol_faults() {
    let cmd = r#"read h; echo '{"type":"handshake","protocol":"hironaka-policy/0","role":"agent","variant":"basic-shifted"}'; cat >/dev/null"#;
    assert!(fault_of(first_decision(cmd)).contains("protocol"));
}

#[test]
fn wrong_role_or_variant_faults() {
    let cmd = r#"read h; echo '{"type":"handshake","protocol":"hironaka-policy/1","role":"host","variant":"basic-shifted"}'; cat >/dev/null"#;
    fault_of(first_decision(cmd));
    let cmd = r#"read h; echo '{"type":"handshake","protocol":"hironaka-policy/1","role":"agent","variant":"hauser"}'; cat >/dev/null"#;
    fault_of(first_decision(cmd));
}

#[test]
fn illegal_move_faults_and_poisons_the_connection() {
    let answer = r#"{\"type\":\"move\",\"id\":$id,\"move\":7}"#;
    let rules = VariantRules::basic_shifted();
    let mut agent =
        ExternalAgent::spawn(&scripted(answer), Variant::BasicShifted, quick()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let all = hironaka::CoordinateSubset::full(3);
    assert!(fault_of(agent.decide(&a2(), all, &rules, &mut rng)).contains("illegal move"));
    assert!(fault_of(agent.decide(&a2(), all, &rules, &mut rng)).contains("already faulted"));

    // A host-shaped answer to an agent request is just as illegal.
    let answer = r#"{\"type\":\"move\",\"id\":$id,\"move\":[0,1]}"#;
    fault_of(first_decision(&scripted(answer)));
}

#[test]
fn wrong_id_faults() {
    let answer = r#"{\"type\":\"move\",\"id\":99$id,\"move\":2}"#;
    assert!(fault_of(first_decision(&scripted(answer))).contains("pending"));
}

#[test]
fn client_error_faults() {
    let answer = r#"{\"type\":\"error\",\"id\":$id,\"message\":\"no idea\"}"#;
    assert!(fault_of(first_decision(&scripted(answer))).contains("no idea"));
}

#[test]
fn silence_times_out() {
    let cmd = format!("read h; echo '{HELLO}'; sleep 5");
    let started = Instant::now();
    assert!(fault_of(first_decision(&cmd)).contains("no answer"));
    assert!(started.elapsed() < Duration::from_secs(4));
}

#[test]
fn broken_streams_fault() {
    let cmd = format!("read h; echo '{HELLO}'; exit 0");
    fault_of(first_decision(&cmd));
    fault_of(first_decision("exit 3"));
    fault_of(first_decision("echo 'not json'"));
    fault_of(first_decision("/nonexistent/policy-binary"));
}

#[test]
fn faults_abort_evaluation() {
    let config = EvalConfig {
        steps: 50,
        repetitions: 1,
        ..EvalConfig::default()
    };
    let ext: AgentSpec = format!("ext:{}", "exit 0").parse().unwrap();
    assert!(matches!(
        rho_estimate(&HostSpec::Zeillinger, &ext, &config),
        Err(GameError::ExternalPolicyFault(_))
    ));
}

#[test]
fn serve_answers_requests_and_errors() {
    let state = hironaka::io::StateDocument::from_state(Variant::BasicShifted, &a2()).to_json();
    let input = format!(
        "{HELLO}\n\
         {{\"type\":\"decide\",\"id\":1,\"state\":{state},\"legal\":[0,1,2],\"host_choice\":[0,1,2]}}\n\
         {{\"type\":\"decide\",\"id\":2,\"state\":{state},\"legal\":[0,1,2]}}\n\
         {{\"type\":\"decide\",\"id\":3,\"state\":{{\"variant\":\"basic\"}},\"legal\":[0],\"host_choice\":[0,1]}}\n"
    );
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    serve(
        Served::Agent(Box::new(hironaka::policy::ChooseLast)),
        Cursor::new(input),
        &mut out,
        &mut rng,
    )
    .unwrap();
    let lines: Vec<WireMessage> = String::from_utf8(out)
        .unwrap()
        .lines()
        .map(|l| WireMessage::parse(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(matches!(&lines[0], WireMessage::Handshake { protocol, .. } if protocol == PROTOCOL));
    assert_eq!(lines[1].to_line(), r#"{"type":"move","id":1,"move":2}"#);
    assert!(matches!(&lines[2], WireMessage::Error { id: Some(2), .. }));
    assert!(matches!(&lines[3], WireMessage::Error { id: Some(3), .. }));

    let wrong =
        r#"{"type":"handshake","protocol":"hironaka-policy/2","role":"agent","variant":"basic"}"#;
    let r = serve(
        Served::Agent(Box::new(ChooseFirst)),
        Cursor::new(wrong),
        Vec::new(),
        &mut rng,
    );
    assert!(matches!(r, Err(GameError::ExternalPolicyFault(_))));
}
