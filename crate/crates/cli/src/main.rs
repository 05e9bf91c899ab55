use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = tpgabor_cli::init_threads() {
        eprintln!("error: {e}");
        println!(
            "{}",
            serde_json::json!({ "status": "error", "code": "UsageError", "message": e.to_string(), "flag": e.flag })
        );
        return ExitCode::from(2);
    }
    let outcome = tpgabor_cli::run_from(std::env::args_os());
    if let Some(msg) = &outcome.message {
        if outcome.status == 0 {
            print!("{msg}");
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    if !outcome.summary.is_null() {
        println!("{}", outcome.summary);
    }
    ExitCode::from(outcome.status as u8)
}
