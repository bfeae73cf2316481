//! Core library for the code tutor: the exercise bank, local source
//! validation, the review prompt pipeline, the LLM correctness judge and the
//! provider-agnostic LLM gateway.

pub mod bank;
pub mod gateway;
pub mod judge;
pub mod review;
pub mod template;
pub mod validate;
