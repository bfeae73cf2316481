//! REST service in front of the exercise bank, the correctness judge and the
//! review pipeline. It is the only component that talks to the LLM; clients
//! send exercise ids and source code, nothing else.

mod config;
mod error;
mod limit;

use std::net::SocketAddr;
use std::sync::{Arc, OnceLock, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{ConnectInfo, Path, Request, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

use codetutor_core::bank::{list_tree, Bank, CategoryNode, Exercise};
use codetutor_core::gateway::Gateway;
use codetutor_core::judge::{run_submission_flow_with, CorrectnessVerdict, SubmissionOutcome, TestCaseOracle};
use codetutor_core::review::{run_review_pipeline_with, PipelineError, PromptProfile, ReviewComment, ReviewOutcome};
use codetutor_core::validate::{ExternalValidator, Validator};

pub use config::{ConfigError, ConfigFile, ServerConfig, DEFAULT_RATE_LIMIT};
pub use error::{ApiError, ErrorCode};
pub use limit::RateLimiter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Initial,
    Improved,
}

impl ProfileName {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "initial" => Some(Self::Initial),
            "improved" => Some(Self::Improved),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Initial => "initial",
            Self::Improved => "improved",
        }
    }

    pub fn profile(self) -> &'static PromptProfile {
        static INITIAL: OnceLock<PromptProfile> = OnceLock::new();
        static IMPROVED: OnceLock<PromptProfile> = OnceLock::new();
        match self {
            Self::Initial => INITIAL.get_or_init(PromptProfile::initial),
            Self::Improved => IMPROVED.get_or_init(PromptProfile::improved),
        }
    }
}

/// Body of `POST /submissions` and `POST /reviews`. The source is the only
/// learner content that reaches the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmissionRequest {
    pub exercise_id: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileName>,
}

/// Exercise as shown to learners: everything except the solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExerciseDetail {
    pub id: String,
    pub title: String,
    pub description: String,
    pub input_examples: Vec<String>,
    pub output_examples: Vec<String>,
    pub category_path: Vec<String>,
}

impl From<&Exercise> for ExerciseDetail {
    fn from(ex: &Exercise) -> Self {
        Self {
            id: ex.id.clone(),
            title: ex.title.clone(),
            description: ex.description.clone(),
            input_examples: ex.input_examples.clone(),
            output_examples: ex.output_examples.clone(),
            category_path: ex.category_path.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub profile: String,
    pub mock: bool,
}

#[derive(Debug, Clone)]
enum BankState {
    Loading,
    Ready(Arc<Bank>),
    Failed(String),
}

#[derive(Debug)]
pub struct AppState {
    bank: RwLock<BankState>,
    gateway: Gateway,
    default_profile: ProfileName,
    validator: Validator,
    oracle: Option<TestCaseOracle>,
    limiter: RateLimiter,
}

impl AppState {
    /// A state with no bank yet; every bank-backed endpoint answers 503 until
    /// [`AppState::set_bank`] is called.
    pub fn new(gateway: Gateway, default_profile: ProfileName) -> Self {
        Self {
            bank: RwLock::new(BankState::Loading),
            gateway,
            default_profile,
            validator: Validator::default(),
            oracle: None,
            limiter: RateLimiter::per_minute(DEFAULT_RATE_LIMIT),
        }
    }

    pub fn from_config(gateway: Gateway, cfg: &ServerConfig) -> Self {
        let default_profile = ProfileName::parse(&cfg.default_profile).unwrap_or(ProfileName::Improved);
        let mut state = Self::new(gateway, default_profile).with_rate_limit(cfg.rate_limit_per_minute);
        if let Some(cmd) = &cfg.external_validator {
            state = state.with_validator(Validator::External(ExternalValidator::new(cmd.clone())));
        }
        if let Some(cmd) = &cfg.oracle_cmd {
            state = state.with_oracle(TestCaseOracle::new(cmd.clone()));
        }
        state
    }

    pub fn with_bank(self, bank: Bank) -> Self {
        self.set_bank(bank);
        self
    }

    pub fn with_validator(mut self, validator: Validator) -> Self {
        self.validator = validator;
        self
    }

    pub fn with_oracle(mut self, oracle: TestCaseOracle) -> Self {
        self.oracle = Some(oracle);
        self
    }

    /// Requests per minute per client on the LLM-backed endpoints; 0 disables.
    pub fn with_rate_limit(mut self, per_minute: u32) -> Self {
        self.limiter = RateLimiter::per_minute(per_minute);
        self
    }

    pub fn set_bank(&self, bank: Bank) {
        *self.bank.write().unwrap_or_else(|e| e.into_inner()) = BankState::Ready(Arc::new(bank));
    }

    pub fn fail_bank(&self, reason: impl Into<String>) {
        *self.bank.write().unwrap_or_else(|e| e.into_inner()) = BankState::Failed(reason.into());
    }

    fn bank_state(&self) -> BankState {
        self.bank.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn bank(&self) -> Result<Arc<Bank>, ApiError> {
        match self.bank_state() {
            BankState::Ready(bank) => Ok(bank),
            BankState::Loading => {
                Err(ApiError::upstream("exercise bank is still loading").with_status(StatusCode::SERVICE_UNAVAILABLE))
            }
            BankState::Failed(reason) => Err(ApiError::upstream(format!("exercise bank unavailable: {reason}"))
                .with_status(StatusCode::SERVICE_UNAVAILABLE)),
        }
    }
}

pub type SharedState = Arc<AppState>;

pub fn router(state: SharedState, cors_origin: Option<&str>) -> Router {
    let origin = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(value) => AllowOrigin::exact(value),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);

    let llm_routes = Router::new()
        .route("/submissions", post(submit))
        .route("/reviews", post(review))
        .route_layer(middleware::from_fn_with_state(state.clone(), rate_limit));

    Router::new()
        .route("/health", get(health))
        .route("/exercises", get(list_exercises))
        .route("/exercises/{id}", get(get_exercise))
        .merge(llm_routes)
        .layer(cors)
        .with_state(state)
}

async fn rate_limit(State(state): State<SharedState>, req: Request, next: Next) -> Response {
    let client = req
        .extensions()
        .get::<ConnectInfo<SocketAddr>>()
        .map(|ConnectInfo(addr)| addr.ip());
    if state.limiter.check(client) {
        next.run(req).await
    } else {
        ApiError::bad_request("rate limit exceeded, try again in a minute")
            .with_status(StatusCode::TOO_MANY_REQUESTS)
            .into_response()
    }
}

async fn health(State(state): State<SharedState>) -> (StatusCode, Json<Health>) {
    let (code, status) = match state.bank_state() {
        BankState::Ready(_) => (StatusCode::OK, "ok"),
        BankState::Loading => (StatusCode::SERVICE_UNAVAILABLE, "loading"),
        BankState::Failed(_) => (StatusCode::SERVICE_UNAVAILABLE, "unavailable"),
    };
    let body = Health {
        status: status.to_string(),
        profile: state.default_profile.as_str().to_string(),
        mock: state.gateway.is_mock(),
    };
    (code, Json(body))
}

async fn list_exercises(State(state): State<SharedState>) -> Result<Json<Vec<CategoryNode>>, ApiError> {
    let bank = state.bank()?;
    Ok(Json(list_tree(&bank)))
}

async fn get_exercise(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Json<ExerciseDetail>, ApiError> {
    let bank = state.bank()?;
    bank.exercise(&id)
        .map(|ex| Json(ExerciseDetail::from(ex)))
        .ok_or_else(|| ApiError::not_found(format!("no exercise with id `{id}`")))
}

struct Job {
    exercise: Exercise,
    source: String,
    profile: &'static PromptProfile,
}

fn prepare(state: &AppState, body: Result<Json<SubmissionRequest>, JsonRejection>) -> Result<Job, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    if req.exercise_id.trim().is_empty() {
        return Err(ApiError::bad_request("exercise_id must not be empty"));
    }
    let bank = state.bank()?;
    let exercise = bank
        .exercise(&req.exercise_id)
        .cloned()
        .ok_or_else(|| ApiError::not_found(format!("no exercise with id `{}`", req.exercise_id)))?;
    Ok(Job {
        exercise,
        source: req.source,
        profile: req.profile.unwrap_or(state.default_profile).profile(),
    })
}

fn pipeline_error(err: PipelineError) -> ApiError {
    log::error!("{err}");
    ApiError::upstream(err.to_string())
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::upstream(format!("worker failed: {e}")))
}

async fn submit(
    State(state): State<SharedState>,
    body: Result<Json<SubmissionRequest>, JsonRejection>,
) -> Result<Json<CorrectnessVerdict>, ApiError> {
    let job = prepare(&state, body)?;
    let outcome = blocking(move || {
        let outcome = run_submission_flow_with(
            &job.exercise,
            &job.source,
            job.profile,
            &state.gateway,
            &state.validator,
        );
        if let (Some(oracle), Ok(SubmissionOutcome::Judged { verdict, .. })) = (&state.oracle, &outcome) {
            oracle.cross_check(&job.exercise, &job.source, verdict);
        }
        outcome
    })
    .await?
    .map_err(pipeline_error)?;

    match outcome {
        SubmissionOutcome::EmptySubmission => Err(ApiError::empty_code()),
        SubmissionOutcome::Invalid(report) => Err(ApiError::invalid_code(report)),
        SubmissionOutcome::Judged { verdict, .. } => Ok(Json(verdict)),
    }
}

async fn review(
    State(state): State<SharedState>,
    body: Result<Json<SubmissionRequest>, JsonRejection>,
) -> Result<Json<ReviewComment>, ApiError> {
    let job = prepare(&state, body)?;
    let outcome = blocking(move || {
        run_review_pipeline_with(
            &job.exercise,
            &job.source,
            job.profile,
            &state.gateway,
            &state.validator,
        )
    })
    .await?
    .map_err(pipeline_error)?;

    match outcome {
        ReviewOutcome::EmptySubmission => Err(ApiError::empty_code()),
        ReviewOutcome::Invalid(report) => Err(ApiError::invalid_code(report)),
        ReviewOutcome::LooksGood(comment) | ReviewOutcome::Reviewed(comment) => Ok(Json(comment)),
    }
}
