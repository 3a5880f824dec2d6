pub mod configurator;
pub mod generator;
pub mod interface;
pub mod model;
pub mod scene;
