pub mod cli;
pub mod entropy;
pub mod error;
pub mod generate;
pub mod io;
pub mod lp_dual;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod ot;
pub mod sdp_dual;
