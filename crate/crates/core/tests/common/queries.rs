//! Published example queries, with `5M`-style amounts written out.

pub const RUNNING: &str = "MATCH TRAIL (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+ \
                           (a) [-[:isLocatedIn]->(c:City) | -[:isLocatedIn]->(c:Country)]";

pub const EXAMPLES: &[&str] = &[
    "MATCH (x:Account WHERE x.isBlocked='no')",
    "MATCH -[e:Transfer WHERE e.amount>5000000]->",
    "MATCH (x)",
    "MATCH (x:Account)",
    "MATCH (x:Account)\nWHERE x.isBlocked='no'",
    "MATCH (x)-[:Transfer]->()-[:isLocatedIn]->(y)",
    "MATCH -[e]->",
    "MATCH (x)-[e]->(y)",
    "MATCH (y WHERE y.owner='Aretha')<-[e:Transfer]-(x)",
    "MATCH (s)-[e]->(m)-[f]->(t)",
    "MATCH (p:Phone WHERE p.isBlocked='yes') \n      ~[e:hasPhone]~(a1:Account)\n      -[t:Transfer WHERE t.amount>1000000]->(a2)",
    "MATCH (s)-[:Transfer]->(s1)-[:Transfer]->(s2)-[:Transfer]->(s)",
    "MATCH p = (s)-[:Transfer]->(s1)-[:Transfer]->(s2)-[:Transfer]->(s)",
    "MATCH (p:Phone)~[:hasPhone]~(s:Account)-[t:Transfer]->\n      (d:Account)~[:hasPhone]~(p)",
    "MATCH (p:Phone WHERE p.isBlocked='yes')~[:hasPhone]~(s:Account),\n      (s)-[t:Transfer WHERE t.amount>1000000]->()",
    "MATCH (s:Account)-[:SignInWithIP]-(),\n      (s)-[t:Transfer WHERE t.amount>1000000]->(),\n      (s)~[:hasPhone]~(p:Phone WHERE p.isBlocked='yes')",
    "MATCH (a:Account)-[:Transfer]->{2,5}(b:Account)",
    "MATCH [(a:Account)-[:Transfer]->(b:Account) WHERE a.owner=b.owner]{2,5}",
    "MATCH (a:Account) \n      [()-[t:Transfer]->() WHERE t.amount>1000000]{2,5} \n      (b:Account)",
    "MATCH (a:Account) \n      [()-[t:Transfer]->() WHERE t.amount>1000000]{2,5} \n      (b:Account)\nWHERE SUM(t.amount)>10000000",
    "MATCH (c:City) | (c:Country)",
    "MATCH (c:City) |+| (c:Country)",
    "MATCH ->{1,5} | ->{3,7}",
    "MATCH ->{1,7}",
    "MATCH [(x)->(y)] | [(x)->(z)]",
    "MATCH [(x)->(y)] | [(x)->(z)], (y)->(w)",
    "MATCH (x) [->(y)]?",
    "MATCH [(x:Account)-[:Transfer]->(y:Account WHERE y.isBlocked='yes')] |\n      [(x:Account)-[:Transfer]->()-[:hasPhone]-(p WHERE p.isBlocked='yes')]",
    "MATCH (x:Account)-[:Transfer]->(y:Account) [-(:hasPhone)-(p)]?\nWHERE y.isBlocked='yes' OR p.isBlocked='yes'",
    "MATCH p = (a WHERE a.owner='Dave')-[t:Transfer]->*\n          (b WHERE b.owner='Aretha')",
    "MATCH TRAIL p = (a WHERE a.owner='Dave')-[t:Transfer]->*\n                (b WHERE b.owner='Aretha')",
    "MATCH ANY SHORTEST \n  p = (a WHERE a.owner='Dave')-[t:Transfer]->*(b WHERE b.owner='Aretha')",
    "MATCH ALL SHORTEST TRAIL\n  p = (a WHERE a.owner='Dave')-[t:Transfer]->*\n      (b WHERE b.owner='Aretha')-[r:Transfer]->*(c WHERE c.owner='Mike')",
    "MATCH (p:Account WHERE p.owner='Natalia')->{1,10}\n      (q:Account WHERE q.owner='Mike')->{1,10}\n      (r:Account WHERE r.owner='Scott')",
    "MATCH ALL SHORTEST (p:Account WHERE p.owner='Scott')->+ \n                   (q:Account WHERE q.isBlocked='yes')->+\n                   (r:Account WHERE r.owner='Charles')",
    "MATCH ALL SHORTEST (p:Account WHERE p.owner='Scott')->+\n                   (q:Account)->+\n                   (r:Account WHERE r.owner='Charles')\nWHERE q.isblocked='yes'",
    "MATCH ALL SHORTEST [ (x)-[e]->*(y) WHERE COUNT(e.*)/(COUNT(e.*)+1)>1 ]",
    "MATCH ALL SHORTEST (x)-[e]->*(y)\nWHERE COUNT(e.*)/(COUNT(e.*)+1) > 1 ",
    "MATCH ALL SHORTEST [ TRAIL (x)-[e]->*(y) WHERE COUNT(e.*)/(COUNT(e.*)+1) > 1 ]",
    "MATCH TRAIL (a WHERE a.owner='Jay')\n            [-[b:Transfer WHERE b.amount>5000000]->]+ \n            (a) [-[:isLocatedIn]->(c:City) |\n                 -[:isLocatedIn]->(c:Country)]",
    "MATCH (a WHERE a.owner='Jay')  \n[()-[b:Transfer WHERE b.amount>5000000 ]->()]{1,} \n(a) [()-[:isLocatedIn]->(c:City) | \n     ()-[:isLocatedIn]->(c:Country)]",
    "MATCH TRAIL\n  (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+\n  (a)-[:isLocatedIn]->(c:City|Country)",
    "MATCH ALL SHORTEST\n  (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+\n  (a) [-[:isLocatedIn]->(c:City) | -[:isLocatedIn]->(c:Country)]",
    "MATCH TRAIL (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+\n (a) [-[:isLocatedIn]->(c:City) |+| -[:isLocatedIn]->(c:Country)]",
    "MATCH -[e]-",
];
