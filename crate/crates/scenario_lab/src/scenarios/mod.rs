pub mod appc1;
pub mod appd;
pub mod ex37;
pub mod ex53;
pub mod ex54;
pub mod ex55;
pub mod ex56;
pub mod fig1;
pub mod fig2;
