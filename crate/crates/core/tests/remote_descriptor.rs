//! The remote descriptor against a local mock chat-completions endpoint.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde_json::{json, Value};

use designlint::descriptor::prompts;
use designlint::descriptor::{
    Descriptor, DescriptorRequest, DescriptorResponse, FallbackDescriptor, Provenance, RemoteConfig, RemoteDescriptor,
};
use designlint::model::RgbaColor;
use designlint::{audit, AuditOptions, AuditReport, CompareSources, ContrastProfile, Deterministic, PageSnapshot};

type Reply = Box<dyn Fn(&Value, usize) -> (u16, String) + Send>;

struct MockServer {
    url: String,
    requests: Arc<Mutex<Vec<(Option<String>, Value)>>>,
}

/// Serves until the test process exits; `reply` gets each request body and
/// its 0-based sequence number.
fn serve(reply: Reply) -> MockServer {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let requests = Arc::new(Mutex::new(Vec::new()));
    let log = requests.clone();
    std::thread::spawn(move || {
        for (n, stream) in listener.incoming().enumerate() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let (mut len, mut auth) = (0usize, None);
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap_or(0);
                }
                if lower.starts_with("authorization:") {
                    auth = Some(line["authorization:".len()..].trim().to_string());
                }
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            let body: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
            let (status, content) = reply(&body, n);
            log.lock().unwrap().push((auth, body));
            let payload = json!({"choices": [{"message": {"role": "assistant", "content": content}}]}).to_string();
            let reason = if status == 200 { "OK" } else { "Error" };
            let _ = write!(
                stream,
                "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
                payload.len()
            );
        }
    });
    MockServer { url, requests }
}

fn user_message(body: &Value) -> &str {
    body["messages"][1]["content"].as_str().unwrap_or("")
}

/// A well-formed answer for whichever prompt the request carries.
fn good_answer(body: &Value) -> String {
    let user = user_message(body);
    if user.starts_with(prompts::FONT_REVIEW) {
        r#"["Mock review of the fonts.", {}, {}]"#.into()
    } else if user.starts_with(prompts::COLOR_SCHEME_SUMMARY) {
        r#"{"summary": "Mock scheme summary.", "details": {"background": "white"}}"#.into()
    } else if user.starts_with(prompts::PALETTE_ROLE_ASSIGNMENT) {
        r#"```json
{"assignments": [], "rationale": "Mock rationale."}
```"#
            .into()
    } else {
        r#"{"name": "Mock Color"}"#.into()
    }
}

fn config(url: &str) -> RemoteConfig {
    let mut c = RemoteConfig::new(url);
    c.key = Some("test-key".into());
    c.model = "mock-model".into();
    c.timeout = Duration::from_secs(10);
    c
}

fn w1() -> PageSnapshot {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/w1.snapshot.json");
    designlint::validate_snapshot(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn run(snapshot: &PageSnapshot, d: &dyn Descriptor) -> AuditReport {
    let options = AuditOptions {
        descriptor: d,
        compare: CompareSources::default(),
        contrast_profile: ContrastProfile::Flat,
        timestamp: None,
    };
    audit(snapshot, &[], &options).unwrap()
}

fn issue_keys(r: &AuditReport) -> BTreeSet<(String, String)> {
    r.issues.iter().map(|f| (f.category.to_string(), f.group_key.clone())).collect()
}

#[test]
fn well_formed_replies_are_used() {
    let server = serve(Box::new(|body, _| (200, good_answer(body))));
    let d = FallbackDescriptor::new(RemoteDescriptor::new(config(&server.url)));
    let snapshot = w1();
    let report = run(&snapshot, &d);

    assert_eq!(report.run_meta.descriptor, "remote");
    assert_eq!(report.font_summary.as_deref(), Some("Mock review of the fonts."));
    let scheme = report.color_scheme.as_ref().unwrap();
    assert_eq!(scheme.summary, "Mock scheme summary.");
    assert_eq!(scheme.provenance, Provenance::Remote);
    assert!(report.notes.iter().all(|n| !n.contains("deterministic output")), "{:?}", report.notes);

    let requests = server.requests.lock().unwrap();
    assert!(!requests.is_empty());
    for (auth, body) in requests.iter() {
        assert_eq!(auth.as_deref(), Some("Bearer test-key"));
        assert_eq!(body["model"], "mock-model");
        assert_eq!(body["temperature"], 0.2);
        assert_eq!(body["messages"][0]["role"], "system");
        assert_eq!(body["messages"][0]["content"], prompts::SYSTEM);
    }

    // Measurements do not depend on the descriptor.
    assert_eq!(issue_keys(&report), issue_keys(&run(&snapshot, &Deterministic)));
}

#[test]
fn an_off_schema_reply_is_retried_once() {
    let server = serve(Box::new(|body, n| {
        if n == 0 {
            (200, "Sure! Here is my review of the fonts.".into())
        } else {
            (200, good_answer(body))
        }
    }));
    let remote = RemoteDescriptor::new(config(&server.url));
    let request = DescriptorRequest::ColorName {
        color: RgbaColor::rgb(135, 206, 235),
    };
    let r = remote.describe(&request).unwrap();
    assert!(matches!(r, DescriptorResponse::ColorName { ref name, .. } if name == "Mock Color"));
    let notes = remote.take_notes();
    assert_eq!(notes.len(), 1, "{notes:?}");
    assert!(notes[0].contains("retried once"));
    assert_eq!(server.requests.lock().unwrap().len(), 2);

    // Cached: asking again does not reach the server.
    remote.describe(&request).unwrap();
    assert_eq!(server.requests.lock().unwrap().len(), 2);
}

#[test]
fn replies_naming_unknown_groups_are_rejected() {
    let server = serve(Box::new(|_, _| (200, r#"["ok", {"h9:nth(1)": "serif"}, {}]"#.into())));
    let remote = RemoteDescriptor::new(config(&server.url));
    let err = remote.describe(&DescriptorRequest::FontReview { groups: vec![] }).unwrap_err();
    assert!(err.to_string().contains("unknown group"), "{err}");
    assert_eq!(server.requests.lock().unwrap().len(), 2);
}

#[test]
fn persistent_garbage_falls_back_to_deterministic_output() {
    let server = serve(Box::new(|_, _| (200, "{\"unexpected\": true}".into())));
    let d = FallbackDescriptor::new(RemoteDescriptor::new(config(&server.url)));
    let snapshot = w1();
    let report = run(&snapshot, &d);
    let local = run(&snapshot, &Deterministic);

    assert!(report.notes.iter().any(|n| n.contains("font_review used deterministic output")));
    assert_eq!(report.font_summary, local.font_summary);
    assert_eq!(issue_keys(&report), issue_keys(&local));
}

#[test]
fn server_errors_fall_back_without_retrying() {
    let server = serve(Box::new(|_, _| (500, String::new())));
    let d = FallbackDescriptor::new(RemoteDescriptor::new(config(&server.url)));
    let r = d
        .describe(&DescriptorRequest::ColorName {
            color: RgbaColor::WHITE,
        })
        .unwrap();
    assert_eq!(r.provenance(), Provenance::Deterministic);
    assert_eq!(server.requests.lock().unwrap().len(), 1);
    let notes = d.take_notes();
    assert!(notes.iter().any(|n| n.contains("color_name used deterministic output")), "{notes:?}");
}

#[test]
fn prompts_embed_the_payload() {
    let request = DescriptorRequest::ColorName {
        color: RgbaColor::rgb(1, 2, 3),
    };
    let (system, user) = prompts::render(&request);
    assert_eq!(system, prompts::SYSTEM);
    let payload: Value = serde_json::from_str(user.strip_prefix(prompts::COLOR_NAME).unwrap()).unwrap();
    assert_eq!(payload["color"]["g"], 2);
}
