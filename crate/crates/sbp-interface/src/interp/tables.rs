// Upper closures of the fine-to-coarse operators, zero-based (row, column).
// Stencils list the interior weights a_0, a_1, ... by distance from the centre.

pub(crate) const P4_TO_2_CLOSURE: &[(usize, usize, &str)] = &[
    (0, 0, "198814379483797276626589/292154366866608903386020"),
    (0, 1, "33159311983113441321394/73038591716652225846505"),
    (0, 2, "1971623072622604595228923/16828091531516672835034752"),
    (0, 3, "-95808836247685639307767/824906447623366315442880"),
    (0, 4, "-1754070195140572218604399/10517557207197920521896720"),
    (0, 5, "-237072760963890638174137/14023409609597227362528960"),
    (0, 6, "55326079761477589117471/2804681921919445472505792"),
    (0, 7, "-120787724660864994449209/14023409609597227362528960"),
    (0, 8, "176943055421257964368859/10517557207197920521896720"),
    (0, 9, "32831043571234596789193/14023409609597227362528960"),
    (0, 10, "88481545475605230181351/4949438685740197892657280"),
    (1, 0, "1342353899420590372183/101394750853705442939854"),
    (1, 1, "87193543695192148191232/253486877134263607349635"),
    (1, 2, "5578077558511726076198789/19467792163911445044451968"),
    (1, 3, "3895790315853711272834919/16223160136592870870376640"),
    (1, 4, "2244981324267232772622413/12167370102444653152782480"),
    (1, 5, "-213524706698808911938359/16223160136592870870376640"),
    (1, 6, "-2744378984383218872921257/48669480409778612611129920"),
    (1, 7, "177648545875941908529241/16223160136592870870376640"),
    (1, 8, "-45572983468520710671107/12167370102444653152782480"),
    (1, 9, "3876549717482752134187/3244632027318574174075328"),
    (1, 10, "-704697674731763751811223/97338960819557225222259840"),
    (2, 0, "-6011306572161601487699/738978692662598990917580"),
    (2, 1, "-17239549725384800082266/184744673165649747729395"),
    (2, 2, "13200899856172905887766503/70941954495609503128087680"),
    (2, 3, "3693069541319881367608217/11823659082601583854681280"),
    (2, 4, "1607455065911582798562599/8867744311951187891010960"),
    (2, 5, "3514316393052784877273751/11823659082601583854681280"),
    (2, 6, "8869555969232379886041937/35470977247804751564043840"),
    (2, 7, "-652819712407377597489161/11823659082601583854681280"),
    (2, 8, "-129041283038038640595559/1773548862390237578202192"),
    (2, 9, "-21210275952319643393399/11823659082601583854681280"),
    (2, 10, "300890344598183653971671/70941954495609503128087680"),
];

pub(crate) const P4_TO_2_STENCIL: &[&str] = &[
    "139882799512953873064261/824906447623366315442880",
    "233575073382358527482521/824906447623366315442880",
    "138809444447592059191981/618679835717524736582160",
    "-27348461476516948621801/824906447623366315442880",
    "-292764282684548619564311/4949438685740197892657280",
];

pub(crate) const P4_CLOSURE: &[(usize, usize, &str)] = &[
    (0, 0, "37625155150141581259/74136705821905530032"),
    (0, 1, "109494000531368265009/157540499871549251318"),
    (0, 2, "598984862036951996355/20165183983558304168704"),
    (0, 3, "-259928664916563226325/2520647997944788021088"),
    (0, 4, "-256587334010286818055/5041295995889576042176"),
    (0, 5, "-113845943840605140771/2520647997944788021088"),
    (0, 6, "-537477213186037277591/10082591991779152084352"),
    (0, 7, "-89579548577713740579/2520647997944788021088"),
    (0, 8, "-33361750807060821603/5041295995889576042176"),
    (0, 9, "45876275221828488395/2520647997944788021088"),
    (0, 10, "891498675213598216803/20165183983558304168704"),
    (1, 0, "-9465638066209876131/2187032821746213135944"),
    (1, 1, "6477310271684014677/18534176455476382508"),
    (1, 2, "23789903736542318389255/69985050295878820350208"),
    (1, 3, "2109162960890226252711/8748131286984852543776"),
    (1, 4, "776008005836532793785/17496262573969705087552"),
    (1, 5, "46983667240315552089/8748131286984852543776"),
    (1, 6, "1087641244818460785021/34992525147939410175104"),
    (1, 7, "220860994180249341801/8748131286984852543776"),
    (1, 8, "77236835126760009513/17496262573969705087552"),
    (1, 9, "-96386094557526072417/8748131286984852543776"),
    (1, 10, "-1793510683939834799913/69985050295878820350208"),
    (2, 0, "9465638066209876131/3187878350341937791376"),
    (2, 1, "-54391101655540111975/796969587585484447844"),
    (2, 2, "1629291546275511894441/51006053605471004662016"),
    (2, 3, "2010507950879293630905/6375756700683875582752"),
    (2, 4, "6208709747109065353983/12751513401367751165504"),
    (2, 5, "1804441319301200448807/6375756700683875582752"),
    (2, 6, "-58210841472168154533/25503026802735502331008"),
    (2, 7, "-395393460093074051961/6375756700683875582752"),
    (2, 8, "-180548419983997949901/12751513401367751165504"),
    (2, 9, "55143363449566679649/6375756700683875582752"),
    (2, 10, "21221519586950580219/1186187293150488480512"),
];

pub(crate) const P4_STENCIL: &[&str] = &[
    "265006822749707021207/593093646575244240256",
    "9/32",
    "10513333512638366307/296546823287622120128",
    "-1/32",
    "-10513333512638366307/1186187293150488480512",
];

pub(crate) const P6_CLOSURE: &[(usize, usize, &str)] = &[
    (0, 0, "493203253466037198549455362364169948587300751/1055237669662369450269932613530339432431112782"),
    (0, 1, "2802735/3494144"),
    (0, 2, "65307081693884397225173945017702348750445730/527618834831184725134966306765169716215556391"),
    (0, 3, "-729595/6988288"),
    (0, 4, "-114866096841096884636391939697630554903763548/527618834831184725134966306765169716215556391"),
    (0, 5, "-1668147/6988288"),
    (0, 6, "-58150488726161516985950806005548507936924127/527618834831184725134966306765169716215556391"),
    (0, 7, "15525/436768"),
    (0, 8, "160596781068985961753206980048680817748946115/1055237669662369450269932613530339432431112782"),
    (0, 9, "89725/436768"),
    (0, 10, "28603010322006197876985672016642805153037153/527618834831184725134966306765169716215556391"),
    (0, 11, "-858195/6988288"),
    (0, 12, "-42754568564745224527531090194001857246708700/527618834831184725134966306765169716215556391"),
    (0, 13, "124485/6988288"),
    (0, 14, "10622334830569558938004175701898426132770338/527618834831184725134966306765169716215556391"),
    (0, 15, "-5409/3494144"),
    (0, 16, "-1157889404765086591410267452043339821491788/527618834831184725134966306765169716215556391"),
    (1, 0, "10324674409544257975653283320299930288476692/464377248357170642761107058624806491383799467"),
    (1, 1, "1201479/3075328"),
    (1, 2, "63083470065854914766431215082154659242790665/464377248357170642761107058624806491383799467"),
    (1, 3, "721527/3075328"),
    (1, 4, "75656801964097450751057400512505712346209266/464377248357170642761107058624806491383799467"),
    (1, 5, "838645/6150656"),
    (1, 6, "30937093119827557151778923229206427591240999/464377248357170642761107058624806491383799467"),
    (1, 7, "345/6150656"),
    (1, 8, "-37294205185814962316045245318486095186507918/464377248357170642761107058624806491383799467"),
    (1, 9, "-100125/768832"),
    (1, 10, "-36281493221658864449474225976906916398553827/928754496714341285522214117249612982767598934"),
    (1, 11, "55219/768832"),
    (1, 12, "22445907670907889073586224542480749734259694/464377248357170642761107058624806491383799467"),
    (1, 13, "-63387/6150656"),
    (1, 14, "-5433667362017414115320173550603825973179156/464377248357170642761107058624806491383799467"),
    (1, 15, "5409/6150656"),
    (1, 16, "578944702382543295705133726021669910745894/464377248357170642761107058624806491383799467"),
    (2, 0, "-5162337204772128987826641660149965144238346/104797029908956098603626174638462532102012849"),
    (2, 1, "-240439/1388032"),
    (2, 2, "23386090748321137420688072323840400038565838/104797029908956098603626174638462532102012849"),
    (2, 3, "105687/173504"),
    (2, 4, "120607102321976279545796687898247496534070403/419188119635824394414504698553850128408051396"),
    (2, 5, "75135/694016"),
    (2, 6, "-14476182846428389369733457155565337017487527/209594059817912197207252349276925064204025698"),
    (2, 7, "-217175/1388032"),
    (2, 8, "6622670052963322216326122365241056731782031/209594059817912197207252349276925064204025698"),
    (2, 9, "344085/1388032"),
    (2, 10, "21321625226448423053859202901015977066304133/209594059817912197207252349276925064204025698"),
    (2, 11, "-78363/694016"),
    (2, 12, "-8305592718705970541713249560330845208737268/104797029908956098603626174638462532102012849"),
    (2, 13, "5473/347008"),
    (2, 14, "1892889085160894469318781649971017262255710/104797029908956098603626174638462532102012849"),
    (2, 15, "-1803/1388032"),
    (2, 16, "-192981567460847765235044575340556636915298/104797029908956098603626174638462532102012849"),
];

pub(crate) const P6_STENCIL: &[&str] = &[
    "25812195338906006034876765214121809824039/77312452902217704613519863252277780967918",
    "75/256",
    "4816511667076067351956187404506405247470/38656226451108852306759931626138890483959",
    "-25/512",
    "-1926604666830426940782474961802562098988/38656226451108852306759931626138890483959",
    "3/512",
    "321100777805071156797079160300427016498/38656226451108852306759931626138890483959",
];

pub(crate) const P8_CLOSURE: &[(usize, usize, &str)] = &[
    (0, 0, "0.49670323986410765203"),
    (0, 1, "0.80670591743192512511"),
    (0, 2, "-0.014476656476698073533"),
    (0, 3, "-0.19497555250083395132"),
    (0, 4, "0.16074268813765884450"),
    (0, 5, "0.22100911221277072755"),
    (0, 6, "-0.53042418939472250452"),
    (0, 7, "-0.86254139670456354517"),
    (0, 8, "0.0064231825172866668299"),
    (0, 9, "0.69727164011248914487"),
    (0, 10, "0.61825742343094006838"),
    (0, 11, "0.43307239695721032895"),
    (0, 12, "-0.15848187861199173328"),
    (0, 13, "-0.83836831742920925562"),
    (0, 14, "-0.41767239062238727391"),
    (0, 15, "0.39252899650233765024"),
    (0, 16, "0.33094736964907844809"),
    (0, 17, "-0.073592865087013788440"),
    (0, 18, "-0.099669762780958210515"),
    (0, 19, "0.010748160731101219580"),
    (0, 20, "0.018056833808814782786"),
    (0, 21, "-0.00077275234787125894193"),
    (0, 22, "-0.0014911993994710636483"),
    (1, 0, "0.0025487859584304862664"),
    (1, 1, "0.47007080279424540800"),
    (1, 2, "0.093589176759289320118"),
    (1, 3, "0.33386224041716468423"),
    (1, 4, "-0.11418395501435496457"),
    (1, 5, "-0.18998278818813064037"),
    (1, 6, "0.38484431284491986603"),
    (1, 7, "0.65828018436035862232"),
    (1, 8, "0.039704539050575728856"),
    (1, 9, "-0.47252462545568042557"),
    (1, 10, "-0.44892698918501097924"),
    (1, 11, "-0.34402935194949605213"),
    (1, 12, "0.087284452472801643396"),
    (1, 13, "0.59539401290875351190"),
    (1, 14, "0.30484430526276345964"),
    (1, 15, "-0.27096308216867871783"),
    (1, 16, "-0.23108785344796321535"),
    (1, 17, "0.050608234918774219796"),
    (1, 18, "0.068801842319351676214"),
    (1, 19, "-0.0073322707316320135247"),
    (1, 20, "-0.012333488857215226757"),
    (1, 21, "0.00052275043402033040521"),
    (1, 22, "0.0010087644967132781708"),
    (2, 0, "-0.022656973277393401539"),
    (2, 1, "-0.93771184228725468159"),
    (2, 2, "-0.052699680965389826267"),
    (2, 3, "1.9581430555012001670"),
    (2, 4, "1.6586148101136731602"),
    (2, 5, "2.7435837109255836264"),
    (2, 6, "-3.0164708462284474624"),
    (2, 7, "-5.8235016129647971089"),
    (2, 8, "-1.0472767830023645070"),
    (2, 9, "3.2615209891555982371"),
    (2, 10, "3.5478595826728208891"),
    (2, 11, "3.0921640208240511054"),
    (2, 12, "-0.34364793368678654581"),
    (2, 13, "-4.5566547247355317663"),
    (2, 14, "-2.4329078834671892590"),
    (2, 15, "1.9882413967858906122"),
    (2, 16, "1.7259601262271516763"),
    (2, 17, "-0.36895458453625989435"),
    (2, 18, "-0.50448363278283993228"),
    (2, 19, "0.052797763052066775846"),
    (2, 20, "0.088972343374038343284"),
    (2, 21, "-0.0037175165926095403240"),
    (2, 22, "-0.0071737841052106668688"),
    (3, 0, "0.0021626748627943672418"),
    (3, 1, "0.027636709246281031633"),
    (3, 2, "-0.00055259484658035070394"),
    (3, 3, "-0.033553649469391355855"),
    (3, 4, "-0.049244245327794891233"),
    (3, 5, "0.093489376222103426899"),
    (3, 6, "0.45734620580442859300"),
    (3, 7, "0.66579609152388478842"),
    (3, 8, "0.24716623315221892947"),
    (3, 9, "-0.15893464065423852815"),
    (3, 10, "-0.25881084331023040874"),
    (3, 11, "-0.26865808253702445366"),
    (3, 12, "-0.018060020510041282529"),
    (3, 13, "0.30841043055726240020"),
    (3, 14, "0.17712461121229459766"),
    (3, 15, "-0.12549015561536110372"),
    (3, 16, "-0.11250298507032009025"),
    (3, 17, "0.022964117700293735857"),
    (3, 18, "0.031709446610808019222"),
    (3, 19, "-0.0032149051440245356510"),
    (3, 20, "-0.0054335286230388551025"),
    (3, 21, "0.00022177994574852164638"),
    (3, 22, "0.00042797426992744435493"),
];

pub(crate) const P8_STENCIL: &[&str] = &[
    "0.33510652017261795103",
    "0.299072265625",
    "0.13191478386190563918",
    "-0.059814453125",
    "-0.065957391930952819589",
    "0.011962890625",
    "0.018844969123129377026",
    "-0.001220703125",
    "-0.0023556211403911721282",
];

pub(crate) const P8_TO_4_CLOSURE: &[(usize, usize, &str)] = &[
    (0, 0, "0.58483823651420605520"),
    (0, 1, "0.65474734710702549940"),
    (0, 2, "-0.083569673821672843574"),
    (0, 3, "0.022425968859768418924"),
    (0, 4, "0.31477269554917488790"),
    (0, 5, "-0.19106598818802213021"),
    (0, 6, "-0.69007595018747002513"),
    (0, 7, "-0.30500476635452414633"),
    (0, 8, "0.011380303429615219398"),
    (0, 9, "0.39023505096198663290"),
    (0, 10, "0.69293443221288252711"),
    (0, 11, "0.27930147563078413713"),
    (0, 12, "-0.17509858064671991258"),
    (0, 13, "-0.36446581507281642455"),
    (0, 14, "-0.53431810490188879575"),
    (0, 15, "-0.047645255801647499040"),
    (0, 16, "0.48950384943343111452"),
    (0, 17, "0.14968600350317559693"),
    (0, 18, "-0.19713593239026365497"),
    (0, 19, "-0.051374514632076414476"),
    (0, 20, "0.048757624195804968082"),
    (0, 21, "0.0066939070511429668639"),
    (0, 22, "-0.0055223124518961777586"),
    (1, 0, "0.011443922859934377398"),
    (1, 1, "0.37277008707234857179"),
    (1, 2, "0.35282527696092662640"),
    (1, 3, "0.096066986437174930272"),
    (1, 4, "-0.22996810860646674853"),
    (1, 5, "0.12123432064337482341"),
    (1, 6, "0.49992261650980671917"),
    (1, 7, "0.25040596791141593267"),
    (1, 8, "0.039631571628602904441"),
    (1, 9, "-0.25355792154009083332"),
    (1, 10, "-0.50801440584689113247"),
    (1, 11, "-0.21961026714024651967"),
    (1, 12, "0.095341708111114624790"),
    (1, 13, "0.24893964119173768791"),
    (1, 14, "0.39235409374512417332"),
    (1, 15, "0.042074861655253219822"),
    (1, 16, "-0.34486664831340391286"),
    (1, 17, "-0.10508512775619684648"),
    (1, 18, "0.13702066788245211707"),
    (1, 19, "0.035285372237949024781"),
    (1, 20, "-0.033422056958152836350"),
    (1, 21, "-0.0045282849361975826191"),
    (1, 22, "0.0037357262504306790489"),
    (2, 0, "-0.095787414722590617699"),
    (2, 1, "-0.68323289165328697626"),
    (2, 2, "-0.43569930844225202810"),
    (2, 3, "1.8027331550089460412"),
    (2, 4, "3.7567210660509388125"),
    (2, 5, "-0.040511780395060609101"),
    (2, 6, "-3.9354784185565657354"),
    (2, 7, "-2.5330463966461275528"),
    (2, 8, "-1.0862631313184671074"),
    (2, 9, "1.5476108406776833914"),
    (2, 10, "4.0781324522987606857"),
    (2, 11, "1.9733308525923243475"),
    (2, 12, "-0.37565017560062195914"),
    (2, 13, "-1.7659882182232900992"),
    (2, 14, "-3.1675028227076565595"),
    (2, 15, "-0.41961367860804052329"),
    (2, 16, "2.6138186452177357535"),
    (2, 17, "0.79040581189389266572"),
    (2, 18, "-1.0153714219277431776"),
    (2, 19, "-0.25660116699213786317"),
    (2, 20, "0.24235775601107244412"),
    (2, 21, "0.032202698057872206652"),
    (2, 22, "-0.026566452015385539718"),
    (3, 0, "0.0085760788432811750313"),
    (3, 1, "0.013512845571180982502"),
    (3, 2, "0.022567253340913112846"),
    (3, 3, "-0.058307759363885212745"),
    (3, 4, "-0.12041195448680664419"),
    (3, 5, "0.22948717483369626712"),
    (3, 6, "0.54863763561981341312"),
    (3, 7, "0.41924435198770363142"),
    (3, 8, "0.25222427818457038144"),
    (3, 9, "-0.029868530356228792693"),
    (3, 10, "-0.30540634608037589943"),
    (3, 11, "-0.18020289186124353787"),
    (3, 12, "-0.015353428793734303657"),
    (3, 13, "0.10180220964078586702"),
    (3, 14, "0.23447509646113431046"),
    (3, 15, "0.040929410205375688302"),
    (3, 16, "-0.17564595949066362349"),
    (3, 17, "-0.051894216445801530355"),
    (3, 18, "0.065022578066260344054"),
    (3, 19, "0.015872184741392310993"),
    (3, 20, "-0.014923762934166461295"),
    (3, 21, "-0.0019211515134671124718"),
    (3, 22, "0.0015849038302656338915"),
];

pub(crate) const P8_TO_4_STENCIL: &[&str] = &[
    "0.35615551493294340455",
    "0.25870815444749646286",
    "0.12963112574463663703",
    "0.018424137003272281874",
    "-0.090162662747982636209",
    "-0.037706537233780062173",
    "0.041177278191813548941",
    "0.010574245783011317441",
    "-0.0087234986549392520415",
];
