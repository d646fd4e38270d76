//! The on-disk JSON formats: scheduling instances, covering instances,
//! selections.
//!
//! ```bash
//! cargo run --example json_formats
//! ```

use gspkit::rcp::instance::{RcpInstance, Selection};
use gspkit::GspInstance;

fn main() {
    let gsp_text = r#"{"jobs":[
        {"id":0,"r":0,"p":2,"cost":{"kind":"tardiness","w":1,"d":2}},
        {"id":1,"r":1,"p":1,"cost":{"kind":"hard-deadline","d":6}},
        {"id":2,"r":0,"p":1,"cost":{"kind":"step","points":[[0,0],[4,"7/2"],[6,"inf"]]}}
    ]}"#;
    let inst: GspInstance = serde_json::from_str(gsp_text).unwrap();
    println!("scheduling instance:\n{}\n", serde_json::to_string_pretty(&inst).unwrap());

    let rcp_text = r#"{
        "rows":[{"j":0,"rects":[{"a":0,"b":2,"c":"1","p":3},{"a":2,"b":4,"c":1,"p":3}]},
                {"j":1,"rects":[{"a":1,"b":3,"c":"5/2","p":2}]}],
        "rays":[{"s":1,"t":2,"d":5}]
    }"#;
    let rcp: RcpInstance = serde_json::from_str(rcp_text).unwrap();
    println!("covering instance:\n{}\n", serde_json::to_string_pretty(&rcp).unwrap());

    let sel: Selection = serde_json::from_str("[0,1,2]").unwrap();
    println!("selection: {}", serde_json::to_string(&sel).unwrap());
}
